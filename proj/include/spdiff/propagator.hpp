#pragma once

// First-order Dyson-series pulse propagator in the Heisenberg picture:
// the eta_j/xi_j coefficient closed forms, the 2x2 matrix elements
//
//   U_nn = cos(phi_t) [1 - i sum_j nubar^(j) t^{j+1}/(j+1)]
//          + (i lambda_n / 2 Omega) sum_j nu^(j) eta_j / Omega^j,
//   U_nm = -i sin(phi_t) [1 - i sum_j nubar^(j) t^{j+1}/(j+1)]
//          - (lambda_n / 2 Omega) sum_j nu^(j) xi_j / Omega^j,
//
// with lambda_{e/g} = -/+1, and the reassembly into Schroedinger-picture
// amplitudes for Gaussian packets.

#include "spdiff/resonance.hpp"
#include "spdiff/wavepacket.hpp"

#include <Eigen/Dense>
#include <complex>
#include <cmath>
#include <stdexcept>

namespace spdiff {

using Mat2c = Eigen::Matrix2cd;
using cplx = std::complex<double>;

struct DysonCoefficients { double eta, xi; };

// Closed forms of the trigonometric time integrals for detuning terms ~ t^j.
inline DysonCoefficients dyson_coefficients(int j, double phi_t) {
    const double s = std::sin(phi_t), co = std::cos(phi_t);
    switch (j) {
    case 0: return {2.0 * s, 0.0};
    case 1: return {2.0 * phi_t * s, -2.0 * s + 2.0 * phi_t * co};
    case 2: return {-4.0 * s + 4.0 * phi_t * co + 4.0 * phi_t * phi_t * s,
                    4.0 * phi_t * (-s + phi_t * co)};
    case 3: return {-12.0 * phi_t * s + 12.0 * phi_t * phi_t * co
                        + 8.0 * phi_t * phi_t * phi_t * s,
                    2.0 * (4.0 * phi_t * phi_t - 6.0) * (-s + phi_t * co)
                        - 4.0 * phi_t * phi_t * s};
    default:
        throw std::invalid_argument("dyson_coefficients: j must be in 0..3");
    }
}

// Heisenberg-picture pulse propagator at a phase-space point (z,p); the
// polynomial coefficients are evaluated at the initial point and the matrix
// assembled from the first-order Dyson expansion. Row/col order: (e, g).
inline Mat2c propagate_heisenberg(const Scenario& s, double z, double p, double t) {
    const double Om = s.Omega();
    const double phi_t = 0.5 * Om * t;
    const PolynomialDetuning co = detuning_coefficients(s, z, p);

    cplx mean_factor(1.0, 0.0);
    {
        double acc = 0.0, tp = t;
        for (int j = 0; j < 4; ++j) { acc += co.nubar[j] * tp / (j + 1); tp *= t; }
        mean_factor -= cplx(0.0, acc);
    }

    double eta_sum = 0.0, xi_sum = 0.0;
    {
        double Oj = 1.0;
        for (int j = 0; j < 4; ++j) {
            const auto d = dyson_coefficients(j, phi_t);
            eta_sum += co.nu[j] * d.eta / Oj;
            xi_sum += co.nu[j] * d.xi / Oj;
            Oj *= Om;
        }
    }

    const double cs = std::cos(phi_t), sn = std::sin(phi_t);
    const cplx I(0.0, 1.0);
    Mat2c U;
    const double lam_e = -1.0, lam_g = +1.0;
    U(0, 0) = cs * mean_factor + I * lam_e / (2.0 * Om) * eta_sum;
    U(1, 1) = cs * mean_factor + I * lam_g / (2.0 * Om) * eta_sum;
    U(0, 1) = -I * sn * mean_factor - lam_e / (2.0 * Om) * xi_sum;
    U(1, 0) = -I * sn * mean_factor - lam_g / (2.0 * Om) * xi_sum;
    return U;
}

// One Schroedinger-picture amplitude psi_{n,j}(p_out, t) for a Gaussian
// packet initially in internal state j. Compton-scale phase offsets
// (-2 phi0, -omega_L t terms, omega_bar t) are returned separately and only
// materialized in e<->g differences.
struct SchroedingerAmplitude {
    cplx envelope;            // complex amplitude from envelope + U matrix element
    double phase_numeric;     // exactly representable slow phases (radians)
    double laser_scalar;      // scalar laser-phase bookkeeping: coefficient of
                              // the route, already materialized in phase_numeric? no:
                              // kept apart; see phase_difference()
    int omega_bar_coeff;      // symbolic coefficient of omega_bar * t

    double arg_without_symbolic() const {
        return std::arg(envelope) + phase_numeric + laser_scalar;
    }
};

// Free-evolution phase of exp(-i(p^2/2m + m g z + wk/4 + obar_ac) t) in the
// momentum representation: psi(P,t) = e^{-i Theta(P,t)} psi_0(P + m g t).
inline double uh_phase(const Scenario& s, double P, double t) {
    const double m = s.species.mbar;
    return P * P * t / (2.0 * m) + 0.5 * s.g * t * t * P
         + s.species.mbar * s.g * s.g * t * t * t / 6.0
         + 0.25 * s.omega_k() * t + s.eff.obar_ac * t;
}

inline SchroedingerAmplitude
propagate_schroedinger(const Scenario& s, const GaussianWavePacket& pk,
                       InternalState start, InternalState out,
                       double p_out, double t) {
    const double k = s.laser.k;
    const double m = s.species.mbar;

    // rotating-frame evaluation momentum: the final U_rot displaces the
    // excited/ground components by +/- hbar k/2
    const double P = (out == InternalState::e) ? p_out - 0.5 * k : p_out + 0.5 * k;
    // initial-time Heisenberg momentum sampled by the pulse propagator
    const double q = P + m * s.g * t;

    const double p0 = (start == InternalState::e) ? pk.p_e : pk.p_g;
    const double z0 = (start == InternalState::e) ? pk.z_e : pk.z_g;
    const double sig = (start == InternalState::e) ? pk.sigma_e : pk.sigma_g;

    // initial rotating-frame packet: U_rot^dag(0) displaces by +/- k/2
    const double shift0 = (start == InternalState::e) ? -0.5 * k : +0.5 * k;
    // envelope argument: rotating momentum q relative to displaced center
    const double dp = q - (p0 + shift0);
    const double envelope = std::exp(-dp * dp / (2.0 * sig * sig));

    // position phase of the initial packet at the sampled momentum
    const double pos_phase = -(q - shift0) * z0;

    const Mat2c U = propagate_heisenberg(s, z0, q, t);
    const int row = (out == InternalState::e) ? 0 : 1;
    const int col = (start == InternalState::e) ? 0 : 1;

    SchroedingerAmplitude a;
    a.envelope = envelope * U(row, col);
    a.phase_numeric = pos_phase - uh_phase(s, P, t);

    // wave-vector modification of the final U_rot phase, evaluated at the
    // Gaussian final center (leading order; the quadratic redshift term is
    // handled analytically in the phases module)
    if (s.ch.wv) {
        const double v0 = p0 / m;
        const double vr = s.v_rec();
        double zc;
        if (start == InternalState::g)
            zc = z0 + v0 * t + 0.5 * vr * t - 0.5 * s.g * t * t;
        else
            zc = z0 + v0 * t - 0.5 * vr * t - 0.5 * s.g * t * t;
        const double eps = 0.5 * k * s.laser.alpha * t / s.c;
        a.phase_numeric += (out == InternalState::e ? +1.0 : -1.0) * eps * zc;
    }

    // scalar laser-phase bookkeeping: final U_rot contributes
    // +/- [ -phi0 - omega_L t (1 + alpha t/(2c)) ] / 2 for out = e/g,
    // initial U_rot^dag contributes -/+ [-phi0]/2 for start = e/g.
    const double wLt = s.laser.omega_L * t * (1.0 + s.laser.alpha * t / (2.0 * s.c));
    double ls = 0.0;
    ls += (out == InternalState::e ? +0.5 : -0.5) * (-s.laser.phi0 - wLt);
    ls += (start == InternalState::e ? -0.5 : +0.5) * (-s.laser.phi0);
    a.laser_scalar = ls;

    a.omega_bar_coeff = (out == InternalState::e) ? -1 : +1;
    return a;
}

// Mirror-pulse phase difference of the diffracted packets,
//   phi_pi = arg psi_{e,g}(p + hbar k) - arg psi_{g,e}(p),
// with the symbolic omega_bar t phases cancelling by construction.
inline double phase_difference_pi(const Scenario& s, const GaussianWavePacket& pk,
                                  double p, double t) {
    const auto a_eg = propagate_schroedinger(s, pk, InternalState::g, InternalState::e,
                                             p + s.laser.k, t);
    const auto a_ge = propagate_schroedinger(s, pk, InternalState::e, InternalState::g,
                                             p, t);
    if (a_eg.omega_bar_coeff + a_ge.omega_bar_coeff != 0)
        throw std::logic_error("phase_difference_pi: symbolic Compton phases do not cancel");
    return a_eg.arg_without_symbolic() - a_ge.arg_without_symbolic();
}

} // namespace spdiff

#pragma once

// Rotating-frame three-level Hamiltonian for magnetically-induced
// single-photon transitions: blocks nu_a, nu_e, nu_g with the displaced
// momentum p +/- hbar*kappa(z,t), the chirp cross term, and the dilaton
// mass corrections.
//
// Blocks are c-number functions of a phase-space point (z, p, t); the
// rest-energy contribution m_j(rho) c^2 - hbar omega_j is evaluated
// symbolically as hbar omega_j beta_j rho so Compton-scale terms never
// cancel in floating point.

#include "spdiff/scenario.hpp"

#include <Eigen/Dense>
#include <complex>

namespace spdiff {

using Mat3c = Eigen::Matrix3cd;

enum class Level { a, e, g };

// Ancilla detuning Delta = omega_a - omega_bar - omega_L/2 (derived, never stored).
inline double ancilla_detuning(const Scenario& s) {
    return s.species.omega_a - s.species.omega_bar - 0.5 * s.laser.omega_L;
}

// Inverse helper: place the ancilla so that ancilla_detuning(s) == Delta.
inline void set_ancilla_detuning(Scenario& s, double Delta) {
    s.species.omega_a = s.species.omega_bar + 0.5 * s.laser.omega_L + Delta;
}

// Displaced momentum argument of the block Hamiltonians: +kappa for a/e,
// -kappa for g. With the wave-vector channel off, kappa reduces to k/2.
inline double displaced_momentum(const Scenario& s, Level lv, double z, double p, double t) {
    const double kap = s.ch.wv ? s.laser.kappa(z, t, s.g, s.c) : 0.5 * s.laser.k;
    return (lv == Level::g) ? p - kap : p + kap;
}

// Block frequency nu_j(z,p,t) relative to the internal frequency omega_j.
inline double nu_block(const Scenario& s, Level lv, double z, double p, double t) {
    const double rho = s.rho_full(z, t);
    const double c2 = s.c * s.c;

    double m0, beta, omega_j, chirp_sign;
    switch (lv) {
    case Level::a:
        omega_j = s.species.omega_a;
        m0 = omega_j / c2;   // ancilla rest mass from omega_a = m_a c^2 / hbar
        beta = 0.0;          // no dilaton coupling modeled for the ancilla
        chirp_sign = +1.0;
        break;
    case Level::e:
        omega_j = s.species.omega_bar + 0.5 * s.species.omega_eg;
        m0 = s.species.mbar + (s.ch.md ? 0.5 * s.species.omega_eg / c2 : 0.0);
        beta = s.species.beta_e;
        chirp_sign = +1.0;
        break;
    case Level::g:
    default:
        omega_j = s.species.omega_bar - 0.5 * s.species.omega_eg;
        m0 = s.species.mbar - (s.ch.md ? 0.5 * s.species.omega_eg / c2 : 0.0);
        beta = s.species.beta_g;
        chirp_sign = -1.0;
        break;
    }

    const double m = m0 * (1.0 + beta * rho);
    const double P = displaced_momentum(s, lv, z, p, t);

    // rest energy: [m_j(rho) c^2 - hbar omega_j]/hbar = omega_j beta_j rho
    // (exact because m_j(0) c^2 = hbar omega_j by construction)
    double nu = omega_j * beta * rho;
    nu += P * P / (2.0 * m);
    nu += m * s.g * z;
    // chirp cross term +/- k alpha (z - c t)/(2c); the z-part is a 1/c
    // wave-vector modification, the t-part is the O(1) chirp detuning
    double cross = -0.5 * s.laser.k * s.laser.alpha * t;
    if (s.ch.wv) cross += 0.5 * s.laser.k * s.laser.alpha * z / s.c;
    nu += chirp_sign * cross;
    return nu;
}

// Full rotating-frame 3x3 Hamiltonian of the Lambda system at (z,p,t):
//   H/hbar = 1/2 [[2(nu_a+Delta), Omega_B, Omega_E],
//                 [Omega_B, 2 nu_e + delta, 0],
//                 [Omega_E, 0, 2 nu_g - delta]]
inline Mat3c build_rotating_hamiltonian(const Scenario& s, double z, double p, double t) {
    const double nua = nu_block(s, Level::a, z, p, t);
    const double nue = nu_block(s, Level::e, z, p, t);
    const double nug = nu_block(s, Level::g, z, p, t);
    Mat3c H = Mat3c::Zero();
    H(0, 0) = nua + ancilla_detuning(s);
    H(1, 1) = nue + 0.5 * s.delta;
    H(2, 2) = nug - 0.5 * s.delta;
    H(0, 1) = H(1, 0) = 0.5 * s.laser.Omega_B;
    H(0, 2) = H(2, 0) = 0.5 * s.laser.Omega_E;
    return H;
}

} // namespace spdiff

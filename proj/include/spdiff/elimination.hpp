#pragma once

// Time-dependent adiabatic elimination of the far-detuned ancilla state:
// projector series P = sum_n P_n with
//   P_0 = -T^dag / Delta,
//   P_1 = (nu_a T^dag - T^dag nu_eg - i dT^dag/dt) / Delta^2,
//   P_{n+1} = (1/Delta)(-nu_a P_n + P_n nu_eg + i dP_n/dt
//                       + sum_{k=0}^{n-1} P_k T P_{n-k}),   n >= 1,
// and the resulting effective two-level Hamiltonian
//   H_rot / hbar ~= -T T^dag / Delta + nu_eg.
//
// Time derivatives are taken by central finite differences with step
// h = 1e-4 / Omega; the derivative terms are higher order in 1/Delta, so
// modest accuracy suffices.

#include "spdiff/scenario.hpp"
#include "spdiff/threelevel.hpp"

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>

namespace spdiff {

using Row2c = Eigen::Matrix<std::complex<double>, 1, 2>;
using Mat2c = Eigen::Matrix2cd;

// Block views of the Lambda Hamiltonian at a fixed phase-space point.
inline Row2c coupling_T_dag(const Scenario& s) {
    Row2c T;
    T << 0.5 * s.laser.Omega_B, 0.5 * s.laser.Omega_E;
    return T;
}

inline Mat2c nu_eg_block(const Scenario& s, double z, double p, double t) {
    Mat2c m = Mat2c::Zero();
    m(0, 0) = nu_block(s, Level::e, z, p, t) + 0.5 * s.delta;
    m(1, 1) = nu_block(s, Level::g, z, p, t) - 0.5 * s.delta;
    return m;
}

// n-th order projector row P_n evaluated at (z,p,t).
inline Row2c projector_order(const Scenario& s, int n, double z, double p, double t) {
    if (n < 0) throw std::invalid_argument("projector_order: n must be >= 0");
    const double Delta = ancilla_detuning(s);
    // Delta is derived from Compton-scale frequencies; values below their
    // roundoff floor are indistinguishable from an exactly resonant ancilla
    const double floor = 1e-12 * (std::abs(s.species.omega_a)
                                  + s.species.omega_bar + s.laser.omega_L);
    if (std::abs(Delta) <= floor)
        throw std::domain_error("projector_order: singular ancilla detuning");

    const Row2c Tdag = coupling_T_dag(s);
    if (n == 0) return (-1.0 / Delta) * Tdag;

    const std::complex<double> I(0.0, 1.0);
    if (n == 1) {
        // T is time independent here, so the dT/dt term vanishes identically;
        // it is kept in the recursion below for generality.
        const double nua = nu_block(s, Level::a, z, p, t);
        return (nua * Tdag - Tdag * nu_eg_block(s, z, p, t)) / (Delta * Delta);
    }

    const double h = 1e-4 / std::abs(s.Omega());
    const Row2c Pn = projector_order(s, n - 1, z, p, t);
    const Row2c dPn = (projector_order(s, n - 1, z, p, t + h)
                     - projector_order(s, n - 1, z, p, t - h)) / (2.0 * h);
    const Eigen::Vector2cd T = Tdag.adjoint();

    Row2c rhs = -nu_block(s, Level::a, z, p, t) * Pn
              + Pn * nu_eg_block(s, z, p, t)
              + I * dPn;
    for (int k = 0; k <= n - 2; ++k) {
        const Row2c Pk = projector_order(s, k, z, p, t);
        const Row2c Pnk = projector_order(s, n - 1 - k, z, p, t);
        rhs += (Pk * T)(0, 0) * Pnk;
    }
    return rhs / Delta;
}

// Effective two-level Hamiltonian H/hbar at (z,p,t):
//   (1/2) [[2 nubar + nu, Omega],[Omega, 2 nubar - nu]]
// with nubar = (nu_e + nu_g)/2 + obar_ac and nu = nu_e - nu_g + delta + domega_ac.
inline Mat2c effective_hamiltonian(const Scenario& s, double z, double p, double t) {
    const double nue = nu_block(s, Level::e, z, p, t);
    const double nug = nu_block(s, Level::g, z, p, t);
    const double nubar = 0.5 * (nue + nug) + s.eff.obar_ac;
    const double nu = nue - nug + s.delta + s.eff.domega_ac;
    Mat2c H;
    H(0, 0) = nubar + 0.5 * nu;
    H(1, 1) = nubar - 0.5 * nu;
    H(0, 1) = H(1, 0) = 0.5 * s.eff.Omega;
    return H;
}

} // namespace spdiff

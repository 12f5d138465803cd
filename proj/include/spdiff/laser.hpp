#pragma once

// Chirped laser field: spacetime phase phi_L, RWA sanity ratio, and the
// coupling parameters of the magnetically-induced transition.

#include <cmath>
#include <stdexcept>

namespace spdiff {

struct LaserField {
    double k;        // wavenumber
    double omega_L;  // laser frequency; dispersion k c = omega_L enforced
    double alpha = 0.0;   // chirp rate (acceleration units)
    double phi0  = 0.0;   // phase offset
    double Omega_E = 0.0; // electric (E1) Rabi frequency
    double Omega_B = 0.0; // magnetic (M1) Rabi frequency
    double Delta   = 0.0; // ancilla detuning

    void validate(double c, bool check_guards = false) const {
        if (omega_L != 0.0 && std::abs(k * c - omega_L) > 1e-12 * std::abs(omega_L))
            throw std::invalid_argument("LaserField: dispersion k c = omega_L violated");
        if (check_guards) {
            if (Delta == 0.0)
                throw std::invalid_argument("LaserField: Delta must be nonzero for elimination");
            if (std::abs(Omega_E / Delta) >= 0.1 || std::abs(Omega_B / Delta) >= 0.1)
                throw std::invalid_argument("LaserField: |Omega_{E,B}/Delta| >= 0.1 breaks the elimination guard");
        }
    }

    // phi_L(z,t) = k z (1 + alpha t/c - (g+alpha) z/(2c^2)) - phi0 - omega_L t (1 + alpha t/(2c))
    double laser_phase(double z, double t, double g, double c) const {
        return k * z * (1.0 + alpha * t / c - (g + alpha) * z / (2.0 * c * c))
             - phi0
             - omega_L * t * (1.0 + alpha * t / (2.0 * c));
    }

    // d(phi_L)/dt at fixed z
    double laser_phase_dt(double z, double t, double c) const {
        return k * z * alpha / c - omega_L * (1.0 + alpha * t / c);
    }

    // |d(phi_L)/dt| / |Omega_E|; ratios of order 10 or below are RWA-suspect.
    double rwa_validity(double z, double t, double c) const {
        if (Omega_E == 0.0)
            throw std::domain_error("LaserField::rwa_validity: Omega_E = 0 gives an undefined ratio");
        return std::abs(laser_phase_dt(z, t, c)) / std::abs(Omega_E);
    }

    // momentum displacement kappa(z,t) = k [1 + alpha t/c - (g+alpha) z/c^2] / 2
    double kappa(double z, double t, double g, double c) const {
        return 0.5 * k * (1.0 + alpha * t / c - (g + alpha) * z / (c * c));
    }
};

} // namespace spdiff

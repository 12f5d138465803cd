#pragma once

// Scalar dilaton field rho = rho_DM + rho_EP and the dilaton-dependent,
// state-dependent atomic mass including the mass defect.
//
// All quantities are in internal units (hbar = 1), see units.hpp.

#include <cmath>
#include <stdexcept>

namespace spdiff {

enum class InternalState { e, g };

struct DilatonField {
    double rho0   = 0.0;   // oscillation amplitude, dimensionless
    double omega_rho = 0.0; // oscillation frequency
    double k_rho  = 0.0;   // oscillation wavenumber
    double phi_rho = 0.0;  // oscillation phase
    double beta_S = 0.0;   // EEP-violation coefficient of the source mass

    // Guard: the amplitude must stay perturbative. Soft by default; the
    // strict path in the CLI turns violations into hard errors.
    double rho0_guard = 1e-2;

    bool amplitude_ok() const { return rho0 >= 0.0 && rho0 < rho0_guard; }

    void validate() const {
        if (rho0 < 0.0) throw std::invalid_argument("DilatonField: rho0 must be >= 0");
        if (omega_rho < 0.0 || k_rho < 0.0)
            throw std::invalid_argument("DilatonField: omega_rho, k_rho must be >= 0");
    }

    // rho(z,t) = rho0 cos(omega_rho t - k_rho z + phi_rho) + beta_S g z / c^2
    double field_value(double z, double t, double g, double c) const {
        return rho0 * std::cos(omega_rho * t - k_rho * z + phi_rho)
             + beta_S * g * z / (c * c);
    }

    // DM part only, frozen at t = 0 (the field is treated as constant on the
    // pulse timescale; validity guards omega_rho/Omega etc. live with callers).
    double dm_frozen_value(double z) const {
        return rho0 * std::cos(-k_rho * z + phi_rho);
    }

    // spatial derivative of the frozen DM part at z
    double dm_frozen_gradient(double z) const {
        return rho0 * k_rho * std::sin(-k_rho * z + phi_rho);
    }
};

struct AtomSpecies {
    double mbar;       // mean mass
    double omega_eg;   // internal transition frequency
    double omega_bar;  // mean internal frequency, mbar c^2 / hbar at SM value
    double omega_a = 0.0; // ancilla frequency offset (used by threelevel)
    double beta_e = 0.0;  // dilaton coupling of |e>
    double beta_g = 0.0;  // dilaton coupling of |g>

    double dbeta() const { return beta_e - beta_g; }
    double bbar()  const { return 0.5 * (beta_e + beta_g); }

    void validate(double mass_ratio_guard = 1e-3, bool enforce_guard = false) const {
        if (mbar <= 0.0) throw std::invalid_argument("AtomSpecies: mbar must be > 0");
        if (enforce_guard && omega_bar > 0.0 && omega_eg / omega_bar >= mass_ratio_guard)
            throw std::invalid_argument("AtomSpecies: omega_eg/omega_bar exceeds perturbative guard");
    }

    // m_j(rho) = m_j(0) [1 + beta_j rho], m_{e/g}(0) = mbar +/- hbar omega_eg/(2 c^2)
    double state_mass(InternalState s, double rho, double c) const {
        if (std::abs(rho) >= 1.0)
            throw std::domain_error("AtomSpecies::state_mass: |rho| >= 1 violates the perturbative regime");
        const double defect = omega_eg / (2.0 * c * c); // hbar = 1
        const double m0 = (s == InternalState::e) ? mbar + defect : mbar - defect;
        const double beta = (s == InternalState::e) ? beta_e : beta_g;
        return m0 * (1.0 + beta * rho);
    }
};

} // namespace spdiff

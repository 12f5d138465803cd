#pragma once

// Scenario: the full parameter bundle for a single pulse, in internal units
// (hbar = 1, frequencies of order Omega, momenta of order hbar k).
//
// Perturbation channels carry independent switches so phases can be
// attributed line by line: dm (oscillating dark matter), ep (EEP-violating
// gradient), md (mass defect, terms ~ omega_eg/omega_bar), wv (wave-vector
// modification, terms ~ 1/c and 1/c^2 of the laser phase).

#include "spdiff/dilaton.hpp"
#include "spdiff/laser.hpp"

#include <cmath>
#include <stdexcept>

namespace spdiff {

struct ChannelSwitches {
    bool dm = false;
    bool ep = false;
    bool md = false;
    bool wv = false;
};

// Effective two-level parameters of the eliminated Lambda system.
struct EffectiveCouplings {
    double Omega     = 0.0; // effective Rabi frequency, -Omega_B Omega_E/(2 Delta)
    double obar_ac   = 0.0; // mean Stark shift, -(Omega_E^2+Omega_B^2)/(8 Delta)
    double domega_ac = 0.0; // differential Stark shift, (Omega_E^2-Omega_B^2)/(4 Delta)

    static EffectiveCouplings from_lambda(double Omega_E, double Omega_B, double Delta) {
        if (Delta == 0.0)
            throw std::domain_error("EffectiveCouplings: singular ancilla detuning Delta = 0");
        EffectiveCouplings ec;
        ec.Omega     = -Omega_B * Omega_E / (2.0 * Delta);
        ec.obar_ac   = -(Omega_E * Omega_E + Omega_B * Omega_B) / (8.0 * Delta);
        ec.domega_ac =  (Omega_E * Omega_E - Omega_B * Omega_B) / (4.0 * Delta);
        return ec;
    }

    // Direct single-photon transition: fundamental Rabi frequency, no Stark shifts.
    static EffectiveCouplings direct(double Omega_direct) {
        if (Omega_direct == 0.0)
            throw std::invalid_argument("EffectiveCouplings::direct: Omega must be nonzero");
        return EffectiveCouplings{Omega_direct, 0.0, 0.0};
    }
};

struct Scenario {
    AtomSpecies species;
    LaserField laser;
    DilatonField dil;
    ChannelSwitches ch;

    double g = 0.0;           // gravitational acceleration
    double c = 299792458.0;   // speed of light (possibly toy-reduced)
    EffectiveCouplings eff;   // effective two-level couplings

    // resonance bookkeeping (set by setup_resonance)
    double p_r   = 0.0;  // resonant momentum (co-rotating frame)
    double delta = 0.0;  // two-level detuning, stored exactly as -(k p_r/mbar + domega_ac)

    bool strict = false;

    double Omega()   const { return eff.Omega; }
    double omega_k() const { return laser.k * laser.k / (2.0 * species.mbar); }
    double v_rec()   const { return laser.k / species.mbar; } // recoil velocity
    double rho_full(double z, double t) const {
        double r = 0.0;
        if (ch.dm) r += dil.rho0 * std::cos(dil.omega_rho * t - dil.k_rho * z + dil.phi_rho);
        if (ch.ep) r += dil.beta_S * g * z / (c * c);
        return r;
    }

    // Choose omega_L for resonance at co-rotating momentum p_r:
    //   omega_L = omega_eg + k p_r/mbar + domega_ac,  with  k = omega_L/c.
    // The joint choice of (k, omega_L) is resolved by fixed-point iteration,
    // which converges geometrically since p_r/(mbar c) << 1.
    void setup_resonance(double p_r_target, int max_iter = 20) {
        if (!std::isfinite(p_r_target))
            throw std::invalid_argument("Scenario::setup_resonance: p_r must be finite");
        p_r = p_r_target;
        double wl = species.omega_eg + eff.domega_ac; // k=0 seed
        double prev = 0.0;
        int it = 0;
        for (; it < max_iter; ++it) {
            prev = wl;
            const double k = wl / c;
            wl = species.omega_eg + k * p_r / species.mbar + eff.domega_ac;
            if (std::abs(wl - prev) <= 1e-15 * std::abs(wl)) break;
        }
        if (it == max_iter)
            throw std::runtime_error("Scenario::setup_resonance: dispersion fixed point did not converge in 20 iterations");
        laser.omega_L = wl;
        laser.k = wl / c;
        // keep the ancilla placement consistent with the configured Delta
        if (laser.Delta != 0.0)
            species.omega_a = species.omega_bar + 0.5 * wl + laser.Delta;
        // Exact form of the detuning: never computed as a difference of
        // Compton-scale frequencies.
        delta = -(laser.k * p_r / species.mbar + eff.domega_ac);
    }

    void validate() const {
        dil.validate();
        species.validate();
        laser.validate(c);
        if (eff.Omega == 0.0)
            throw std::invalid_argument("Scenario: effective Rabi frequency must be nonzero");
    }
};

} // namespace spdiff

#pragma once

// Shared toy-scenario builders for the test suite. The toy unit system uses
// hbar = 1, Omega = 1 and an artificially small speed of light so that 1/c
// and 1/c^2 corrections are numerically resolvable while staying perturbative.

#include "spdiff/phases.hpp"
#include "spdiff/propagator.hpp"
#include "spdiff/scenario.hpp"
#include "spdiff/wavepacket.hpp"

#include <random>

namespace spdiff::testing {

// Direct-transition toy scenario, all channels off, perfect chirp.
inline Scenario make_toy(double Omega = 1.0, double g = 0.1, double c = 200.0,
                         double mbar = 20.0, double omega_eg = 200.0,
                         double p_r = 0.2) {
    Scenario s;
    s.species.mbar = mbar;
    s.species.omega_eg = omega_eg;
    s.species.omega_bar = mbar * c * c; // hbar = 1
    s.g = g;
    s.c = c;
    s.laser.alpha = -g;
    s.eff = EffectiveCouplings::direct(Omega);
    s.setup_resonance(p_r);
    return s;
}

// Magnetically-induced variant with an explicit Lambda system.
inline Scenario make_magnetic(double Omega_E, double Omega_B, double Delta,
                              double g = 0.1, double c = 200.0,
                              double mbar = 20.0, double omega_eg = 200.0,
                              double p_r = 0.2) {
    Scenario s;
    s.species.mbar = mbar;
    s.species.omega_eg = omega_eg;
    s.species.omega_bar = mbar * c * c;
    s.g = g;
    s.c = c;
    s.laser.alpha = -g;
    s.laser.Omega_E = Omega_E;
    s.laser.Omega_B = Omega_B;
    s.laser.Delta = Delta;
    s.eff = EffectiveCouplings::from_lambda(Omega_E, Omega_B, Delta);
    s.setup_resonance(p_r); // also places the ancilla at the configured Delta
    return s;
}

// Resonant packet pair: g/e packets at the lab momenta of the resonant
// co-rotating momentum p_r, separated by dz.
inline GaussianWavePacket make_packet(const Scenario& s, double sigma = 0.5,
                                      double z_g = 0.0, double dz = 4.0) {
    GaussianWavePacket pk;
    pk.sigma_e = pk.sigma_g = sigma;
    pk.p_g = s.p_r - 0.5 * s.laser.k;
    pk.p_e = s.p_r + 0.5 * s.laser.k;
    pk.z_g = z_g;
    pk.z_e = z_g + dz;
    return pk;
}

// Evaluation momentum of the mirror-pulse phase difference: the fallen
// center of the resonant pair after a pulse of duration t.
inline double eval_momentum(const Scenario& s, double t) {
    return s.p_r - 0.5 * s.laser.k - s.species.mbar * s.g * t;
}

// Randomized perturbed scenario with guard parameter close to eps_target:
// every detuning contribution is scaled so max_j |nu^(j) t^j| ~ eps * Omega.
inline Scenario make_random_perturbed(std::mt19937_64& rng, double eps_target) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Scenario s = make_toy();
    const double Om = s.Omega(), T = M_PI / Om, k = s.laser.k;

    s.ch = {true, true, true, true};
    // velocity selectivity ~ eps
    const double dp = eps_target * Om * s.species.mbar / k * u(rng);
    // chirp mismatch: k(g+alpha)T ~ eps
    s.laser.alpha = -s.g + eps_target * Om / (k * T) * u(rng);
    // mass defect: (omega_eg/omega_bar) mbar g z ~ eps
    s.species.omega_eg = eps_target * Om * s.species.omega_bar
        / (s.species.mbar * s.g * 4.0) * std::abs(u(rng));
    // dilaton channels
    s.species.beta_e = eps_target / 2.0 * u(rng);
    s.species.beta_g = eps_target / 2.0 * u(rng);
    s.dil.rho0 = 1.0 / s.species.omega_bar; // omega_bar*beta*rho ~ eps
    s.dil.k_rho = 0.05;
    s.dil.phi_rho = M_PI * u(rng);
    s.dil.beta_S = std::abs(u(rng));
    s.setup_resonance(0.2 + dp);
    // evaluate slightly off resonance so nu^(0) != 0
    return s;
}

} // namespace spdiff::testing

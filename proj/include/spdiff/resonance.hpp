#pragma once

// Mean Heisenberg picture: free-fall trajectories, the effective detuning
// nu_H(t) and mean energy nubar_H(t), the resonant laser frequency, and the
// polynomial-in-time coefficient expansion
//     nu_H    = sum_j nu^(j)    t^j,
//     nubar_H = sum_j nubar^(j) t^j,   j = 0..3.
//
// The coefficient tables were re-derived from the defining expressions for
// nu_H and nubar_H (symbolic expansion in powers of t); three cells that are
// sometimes quoted differently are implemented in the form consistent with
// the direct evaluation:
//   nu^(2):    the Doppler-redshift cross term carries a factor 3/2,
//              +(3/2) nu_k g(g+alpha)/c^2;
//   nu^(3):    -k(g+alpha) g^2/(2 c^2);
//   nubar^(2): omega_k/2 * [alpha^2/(2c^2) + (g+alpha) g/(2c^2)] - ...
// Consistency is enforced by tests comparing against the direct evaluation.

#include "spdiff/scenario.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace spdiff {

struct HeisenbergTrajectory {
    double p0, z0, mbar, g;
    double p(double t) const { return p0 - mbar * g * t; }
    double z(double t) const { return z0 + p0 * t / mbar - 0.5 * g * t * t; }
};

// Effective detuning in the Heisenberg picture as a c-number function of the
// initial phase-space point (z,p). The anticommutator {A,B} evaluates to 2AB
// for c-numbers. With dm_frozen the DM field is evaluated at (z, 0).
inline double heisenberg_detuning(const Scenario& s, double z, double p, double t,
                                  bool dm_frozen = false) {
    const double k = s.laser.k, al = s.laser.alpha, g = s.g, c = s.c;
    const double m = s.species.mbar;
    const double pH = p - m * g * t;
    const double zH = z + p * t / m - 0.5 * g * t * t;

    double nu = k * (p - s.p_r) / m - k * (al + g) * t;
    if (s.ch.wv) nu += k * al * zH / c;
    if (s.ch.md) {
        const double wk = s.omega_k();
        nu += s.species.omega_eg / s.species.omega_bar
            * (m * g * zH - pH * pH / (2.0 * m) - 0.25 * wk);
    }
    if (s.ch.dm || s.ch.ep) {
        double rho = 0.0;
        if (s.ch.dm) rho += dm_frozen ? s.dil.dm_frozen_value(z)
                                      : s.dil.rho0 * std::cos(s.dil.omega_rho * t - s.dil.k_rho * zH + s.dil.phi_rho);
        if (s.ch.ep) rho += s.dil.beta_S * g * zH / (c * c);
        nu += s.species.omega_bar * s.species.dbeta() * rho;
    }
    if (s.ch.wv)
        nu += 2.0 * (k * pH / (2.0 * m)) * (al * t / c - (g + al) * zH / (c * c));
    return nu;
}

// Reduced mean energy in the Heisenberg picture.
inline double heisenberg_mean(const Scenario& s, double z, double p, double t,
                              bool dm_frozen = false) {
    const double k = s.laser.k, al = s.laser.alpha, g = s.g, c = s.c;
    const double m = s.species.mbar;
    const double pH = p - m * g * t;
    const double zH = z + p * t / m - 0.5 * g * t * t;

    double nb = 0.0;
    if (s.ch.dm || s.ch.ep) {
        double rho = 0.0;
        if (s.ch.dm) rho += dm_frozen ? s.dil.dm_frozen_value(z)
                                      : s.dil.rho0 * std::cos(s.dil.omega_rho * t - s.dil.k_rho * zH + s.dil.phi_rho);
        if (s.ch.ep) rho += s.dil.beta_S * g * zH / (c * c);
        nb += s.species.omega_bar * s.species.bbar() * rho;
    }
    if (s.ch.md)
        nb += -k * pH / (4.0 * m) * s.species.omega_eg / s.species.omega_bar;
    if (s.ch.wv)
        nb += 0.5 * s.omega_k()
            * (al * t / c + (0.5 * al * al * t * t - (g + al) * zH) / (c * c));
    return nb;
}

struct PolynomialDetuning {
    std::array<double, 4> nu{};     // nu^(j)
    std::array<double, 4> nubar{};  // nubar^(j)
    double p_r = 0.0;
    double omega_L = 0.0;

    double nu_at(double t) const {
        return ((nu[3] * t + nu[2]) * t + nu[1]) * t + nu[0];
    }
    double nubar_at(double t) const {
        return ((nubar[3] * t + nubar[2]) * t + nubar[1]) * t + nubar[0];
    }
};

// Polynomial expansion of nu_H, nubar_H in powers of t, DM frozen at t=0.
inline PolynomialDetuning detuning_coefficients(const Scenario& s, double z, double p) {
    const double k = s.laser.k, al = s.laser.alpha, g = s.g, c = s.c;
    const double c2 = c * c;
    const double m = s.species.mbar;
    const double wk = s.omega_k();
    const double nu_k = k * p / m;
    const double weg_wbar = s.ch.md ? s.species.omega_eg / s.species.omega_bar : 0.0;
    const double rho_dm = s.ch.dm ? s.dil.dm_frozen_value(z) : 0.0;
    const double beta_S = s.ch.ep ? s.dil.beta_S : 0.0;
    const double db = s.species.dbeta(), bb = s.species.bbar();
    const double wbar = s.species.omega_bar;

    PolynomialDetuning out;
    out.p_r = s.p_r;
    out.omega_L = s.laser.omega_L;

    // --- detuning coefficients nu^(j) ---
    // t^0: velocity selectivity + wave-vector + mass-defect + dilaton terms
    double n0 = k * (p - s.p_r) / m;
    if (s.ch.wv) n0 += k * al * z / c;
    n0 += weg_wbar * (m * g * z - p * p / (2.0 * m) - 0.25 * wk);
    n0 += wbar * db * rho_dm + wbar * db * beta_S * g * z / c2;
    if (s.ch.wv) n0 += -2.0 * (k * p / (2.0 * m)) * (g + al) * z / c2;
    out.nu[0] = n0;

    // t^1
    double n1 = -k * (g + al);
    if (s.ch.wv) n1 += -k * (g + al) * (p * p / (m * m * c2) - g * z / c2)
                     + 2.0 * nu_k * al / c;
    n1 += (2.0 * weg_wbar + db * beta_S) * g * p;
    out.nu[1] = n1;

    // t^2
    double n2 = 0.0;
    if (s.ch.wv) n2 += -1.5 * k * g * al / c + 1.5 * nu_k * g * (g + al) / c2;
    n2 += -weg_wbar * m * g * g - wbar * db * beta_S * g * g / (2.0 * c2);
    out.nu[2] = n2;

    // t^3
    out.nu[3] = s.ch.wv ? -0.5 * k * (g + al) * g * g / c2 : 0.0;

    // --- mean-energy coefficients nubar^(j) ---
    double b0 = wbar * bb * rho_dm + wbar * bb * beta_S * g * z / c2;
    b0 += -k * p / (4.0 * m) * weg_wbar;
    if (s.ch.wv) b0 += -0.5 * wk * (g + al) * z / c2;
    out.nubar[0] = b0;

    double b1 = bb * beta_S * g * p + 0.25 * k * g * weg_wbar;
    if (s.ch.wv) b1 += 0.5 * wk * (al / c - (g + al) * p / (m * c2));
    out.nubar[1] = b1;

    double b2 = -wbar * bb * beta_S * g * g / (2.0 * c2);
    if (s.ch.wv) b2 += 0.5 * wk * (0.5 * al * al / c2 + 0.5 * (g + al) * g / c2);
    out.nubar[2] = b2;

    out.nubar[3] = 0.0;
    return out;
}

// Unperturbed resonance choice: omega_L = omega_eg + k p_r/mbar + domega_ac
// with the dispersion k = omega_L/c re-enforced by fixed-point iteration.
inline double resonant_laser_frequency(Scenario& s, double p_r) {
    s.setup_resonance(p_r);
    return s.laser.omega_L;
}

} // namespace spdiff

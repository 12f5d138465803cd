#pragma once

// Analytic mirror-pulse phase budget: the decomposition of
//   phi_pi = arg psi_{e,g}(p + hbar k, t) - arg psi_{g,e}(p, t)
// into phi_0 + phi_DM + phi_EP + phi_MD + phi_WV, the generalized
// wave-vector phase for imperfect chirping, and the WV/MD ratio relation.
//
// Conventions: packets are <p|psi_0> ~ exp(-(p-p0)^2/(2 hbar^2 sigma^2)
// - i p z0 / hbar), i.e. physically centered at z0 with the standard
// <z|p> = exp(+i p z/hbar) transform. Every line below was validated
// against the brute-force grid solver in this convention; the signs of all
// packet-position-dependent terms are fixed by that convention.

#include "spdiff/scenario.hpp"
#include "spdiff/wavepacket.hpp"

#include <cmath>
#include <stdexcept>

namespace spdiff {

struct PhaseBudget {
    double phi0 = 0.0;
    double phi_dm = 0.0;
    double phi_ep = 0.0;
    double phi_md = 0.0;
    double phi_wv = 0.0;
    bool chirp_perfect = false;

    double total() const { return phi0 + phi_dm + phi_ep + phi_md + phi_wv; }
};

namespace detail {

// Common Doppler-type factor k p/m + omega_k + k g t/2 of the EP and MD
// recoil terms (the pulse samples the packet at the initial-time co-rotating
// momentum p + hbar k/2 + mbar g t).
inline double recoil_doppler(const Scenario& s, double p, double t) {
    return s.laser.k * p / s.species.mbar + s.omega_k()
         + 0.5 * s.laser.k * s.g * t;
}

// Time integral of the arm separation over the mirror pulse. The photon
// recoil makes the separation breathe: the diffracted route gains hbar k at
// the (sin-distributed) transfer time while the other route loses it, so
//   int_0^t [dz + v_r tau - 2 v_r <(tau - tau*)_+>] dtau
//     = dz t + v_r t^2/2 - v_r (pi^2 - 4)/(2 Omega^2).
inline double separation_integral(const Scenario& s, double dz, double t) {
    const double Om2 = s.Omega() * s.Omega();
    return dz * t + 0.5 * s.v_rec() * t * t
         - s.v_rec() * (M_PI * M_PI - 4.0) / (2.0 * Om2);
}

// Route-summed displacement factor z  +  p t/m + v_r t/2 + g t^2/2 of the
// wave-vector phase.
inline double wv_drift(const Scenario& s, double p, double t) {
    return p * t / s.species.mbar + 0.5 * s.v_rec() * t + 0.5 * s.g * t * t;
}

} // namespace detail

// Perfect-chirp (alpha = -g) closed form of the wave-vector phase.
inline double wv_phase_perfect(const Scenario& s, const GaussianWavePacket& pk,
                               double p, double t) {
    const double k = s.laser.k, g = s.g, c = s.c;
    const double Om = s.Omega();
    return -(k * g * t / c) * (pk.zbar() + detail::wv_drift(s, p, t))
         + (k * g / (c * Om * Om))
             * (4.0 * p / s.species.mbar + 2.0 * s.v_rec() + g * t);
}

// The sigma-dependent part of the general wave-vector phase: present only
// for a chirping mismatch (proportional to g+alpha), zero otherwise.
inline double wv_sigma_terms(const Scenario& s, const GaussianWavePacket& pk,
                             double p, double t) {
    const double ga = s.g + s.laser.alpha;
    if (ga == 0.0) return 0.0;
    const double k = s.laser.k, c2 = s.c * s.c, m = s.species.mbar;
    const double de = (pk.p_e - p - k - m * s.g * t) / (pk.sigma_e * pk.sigma_e);
    const double dg = (pk.p_g - p - m * s.g * t) / (pk.sigma_g * pk.sigma_g);
    return (k * ga / (2.0 * c2))
         * (de * de - 1.0 / (pk.sigma_e * pk.sigma_e)
            + dg * dg - 1.0 / (pk.sigma_g * pk.sigma_g));
}

// General wave-vector phase for arbitrary chirp rate; all but the first two
// terms are proportional to (g+alpha) and cancel for perfect chirping, where
// the expression reduces exactly to wv_phase_perfect. Only in the mismatched
// case the finite packet widths sigma_{e/g} enter.
inline double wv_phase_general(const Scenario& s, const GaussianWavePacket& pk,
                               double p, double t) {
    const double k = s.laser.k, g = s.g, c = s.c, al = s.laser.alpha;
    const double m = s.species.mbar, Om = s.Omega();
    const double c2 = c * c;
    const double vr = s.v_rec();
    const double drift = detail::wv_drift(s, p, t);
    const double zbar = pk.zbar(), dz = pk.dz();

    double phi = (k * al * t / c) * (zbar + drift)
               - (k * al / (Om * Om)) * (4.0 * p / (m * c) + 2.0 * vr / c + g * t / c);

    const double ga = g + al;
    if (ga != 0.0) {
        phi += wv_sigma_terms(s, pk, p, t);
        phi += (k * ga / (2.0 * c2))
             * (-(zbar + drift) * (zbar + drift) - zbar * zbar
                - 0.5 * dz * dz);
        phi += -dz * ga / (2.0 * c2) * s.omega_k() * t;
        const double pi2 = M_PI * M_PI;
        phi += (k * ga / (Om * Om))
             * (2.0 * (p / (m * c) + 0.5 * vr / c) * (p / (m * c) + 0.5 * vr / c)
                + p * g * t / (m * c2) + 0.5 * vr * g * t / c2
                - 2.0 * g * zbar / c2
                + (pi2 - 12.0) / (2.0 * pi2) * (g * t / c) * (g * t / c));
    }
    return phi;
}

// Full mirror-pulse budget at evaluation momentum p and pulse time t = pi/Omega.
// The Compton-scale offsets -2 phi0 and -omega_L t (1 + alpha t/(2c)) are part
// of phi0 and are materialized here in internal units (where they are exactly
// representable); the symbolic omega_bar t phases cancel in the e<->g
// difference by construction and never appear.
inline PhaseBudget mirror_phase_budget(const Scenario& s, const GaussianWavePacket& pk,
                                       double p, double t) {
    const double k = s.laser.k, g = s.g, c = s.c, al = s.laser.alpha;
    const double m = s.species.mbar, Om = s.Omega();
    const double dz = pk.dz(), zbar = pk.zbar();

    PhaseBudget b;
    b.chirp_perfect = (al == -g);

    b.phi0 = -2.0 * s.laser.phi0
           + k * (zbar + 0.5 * dz)
           + dz * (p + m * g * t)
           + 2.0 * k * (g + al) / (Om * Om)
           - s.laser.omega_L * (t + 0.5 * al * t * t / c);

    if (s.ch.dm) {
        // gradient line integrated along the routes: the arm separation
        // breathes by the recoil, the midpoint drifts by vbar tau - g tau^2/2
        // (entering through the second field derivative), and the
        // differential coupling dbeta samples the field gradient through the
        // pulse envelope with weight cos(Omega tau) - the same mechanism as
        // the recoil term of the EP line below, generalized to a curved field
        const double aOm = std::abs(Om);
        const double vbar = p / m + g * t + 0.5 * s.v_rec();
        const double rho1 = s.dil.dm_frozen_gradient(zbar);
        const double rho2 = -s.dil.k_rho * s.dil.k_rho * s.dil.dm_frozen_value(zbar);
        const double drift1 = 0.5 * vbar * t * t - g * t * t * t / 6.0;
        const double envelope = -2.0 * vbar / (Om * Om) + M_PI * g / (aOm * aOm * aOm);
        b.phi_dm = s.species.omega_bar
                 * (s.species.bbar() * (rho1 * detail::separation_integral(s, dz, t)
                                        + rho2 * dz * drift1)
                    + s.species.dbeta() * rho1 * envelope);
    }

    if (s.ch.ep)
        b.phi_ep = s.species.bbar() * s.dil.beta_S * m * g
                     * detail::separation_integral(s, dz, t)
                 - 2.0 * s.species.dbeta() * s.dil.beta_S * (g / s.v_rec()) / (Om * Om)
                     * detail::recoil_doppler(s, p, t);

    if (s.ch.md)
        b.phi_md = -4.0 * (s.species.omega_eg / s.species.omega_bar)
                 * (g / s.v_rec()) / (Om * Om) * detail::recoil_doppler(s, p, t);

    if (s.ch.wv)
        b.phi_wv = b.chirp_perfect ? wv_phase_perfect(s, pk, p, t)
                                   : wv_phase_general(s, pk, p, t);
    return b;
}

// Closed-form ratio phi_WV / phi_MD at perfect chirping (alpha = -g),
// derived from the two budget lines with D = 2pt/m + v_r t + g t^2:
//   ratio = (k c / (2 omega_eg)) [ pi^2/2 - 2 + pi^2 zbar/D + g t^2/D ].
inline double wv_md_ratio(const Scenario& s, const GaussianWavePacket& pk,
                          double p, double t) {
    if (s.species.omega_eg == 0.0)
        throw std::domain_error("wv_md_ratio: phi_MD vanishes, ratio undefined");
    const double D = 2.0 * p * t / s.species.mbar + s.v_rec() * t + s.g * t * t;
    if (D == 0.0)
        throw std::domain_error("wv_md_ratio: degenerate kinematics, D = 0");
    const double pi2 = M_PI * M_PI;
    return s.laser.k * s.c / (2.0 * s.species.omega_eg)
         * (0.5 * pi2 - 2.0 + pi2 * pk.zbar() / D + s.g * t * t / D);
}

} // namespace spdiff

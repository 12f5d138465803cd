#pragma once

// Brute-force numerical ground truth:
//  (a) fixed-step RK4 integration (with step-halving convergence control) of
//      the two-level Heisenberg-frame Hamiltonian and of the exact
//      three-level rotating-frame Hamiltonian at a phase-space point;
//  (b) a position-grid split-step Fourier solver for the full two-component
//      rotating-frame wave-packet dynamics, used to validate the analytic
//      phase budget and resonance predictions.

#include "spdiff/scenario.hpp"
#include "spdiff/threelevel.hpp"
#include "spdiff/wavepacket.hpp"

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace spdiff {

using Mat2c = Eigen::Matrix2cd;

// --- ODE oracles -----------------------------------------------------------

// Integrates i dU/dt = H_H(t) U with H_H built from the direct Heisenberg
// detuning/mean-energy expressions (DM frozen at t=0, matching the polynomial
// expansion's regime). Step count doubles until the matrix elements change by
// less than `tol` (max 20 doublings), then the converged U is returned.
Mat2c ode_two_level(const Scenario& s, double z, double p, double t_final,
                    double tol = 1e-12);

// Same contract for the exact 3x3 rotating-frame Lambda system.
// Basis order: (a, e, g).
Eigen::Matrix3cd ode_three_level(const Scenario& s, double z, double p,
                                 double t_final, double tol = 1e-12);

// --- Grid oracle ------------------------------------------------------------

struct GridSpec {
    double extent = 0.0;    // total length of the periodic box; 0 = auto
    std::size_t points = 1 << 14;  // power of two
    std::size_t steps = 4000;      // time steps over the pulse
    bool snapshot = false;
    std::string snapshot_path;
};

struct OracleResult {
    // final rotating-frame wave function on the grid, per internal state
    std::vector<std::complex<double>> psi_e, psi_g;
    std::vector<double> zgrid;
    double extent = 0.0;
    std::size_t steps = 0;

    double norm = 0.0;            // total norm at t_final (initial norm 1)
    double boundary_leak = 0.0;   // max edge density / peak density
    double transfer = 0.0;        // population in the internal state opposite
                                  // to the initial one

    // Momentum-space amplitude of one component at an arbitrary lab momentum
    // (direct discrete Fourier sum; includes the final U_rot spatial phases).
    std::complex<double> amp_e = 0.0, amp_g = 0.0; // filled by callers via amp_at
};

class GridEvolver {
public:
    GridEvolver(const Scenario& s, const GridSpec& grid);
    ~GridEvolver();
    GridEvolver(const GridEvolver&) = delete;
    GridEvolver& operator=(const GridEvolver&) = delete;

    // Evolve a packet initially in internal state `start` (momentum p0,
    // position z0, width sigma) through a pulse of duration t_final.
    OracleResult evolve(InternalState start, double p0, double z0, double sigma,
                        double t_final);

    // Momentum-space amplitude <p_lab| of one component of a finished run,
    // including the final U_rot spatial phase for that component.
    std::complex<double> amp_at(const OracleResult& r, InternalState which,
                                double p_lab, double t_final) const;

private:
    struct Impl;
    Impl* impl_;
};

// Convenience wrapper: full mirror-pulse phase difference
//   arg psi_{e,g}(p + hbar k) - arg psi_{g,e}(p)
// from two grid runs, including the scalar laser-phase offsets
// (-2 phi0 - omega_L t (1 + alpha t/(2c))) so it is directly comparable with
// the analytic budget. Packets start at (p_g, z_g) and (p_e, z_e).
struct GridPhaseResult {
    double phi_pi = 0.0;
    double amp_eg = 0.0, amp_ge = 0.0; // |amplitudes| at the sampled momenta
    double norm_eg = 0.0, norm_ge = 0.0;
    double boundary_leak = 0.0;
};

GridPhaseResult grid_mirror_phase(const Scenario& s, const GaussianWavePacket& pk,
                                  double p_eval, double t, const GridSpec& grid);

// Transfer probability of a single run (for resonance scans / Rabi curves).
double grid_transfer(const Scenario& s, double p0, double z0, double sigma,
                     double t, const GridSpec& grid);

// Write a finished grid state in the documented binary snapshot layout:
// magic 'SPDF', version u32, points u64, extent f64, then interleaved
// little-endian f64 (re, im) pairs for psi_e followed by psi_g.
void write_snapshot(const OracleResult& r, const std::string& path);

} // namespace spdiff

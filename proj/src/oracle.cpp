#include "spdiff/oracle.hpp"
#include "spdiff/resonance.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <mutex>
#include <stdexcept>

namespace spdiff {

using cplx = std::complex<double>;
static const cplx I(0.0, 1.0);

// ---------------------------------------------------------------------------
// RK4 with step-halving convergence control
// ---------------------------------------------------------------------------

namespace {

template <typename Mat, typename Rhs>
Mat rk4_propagator(const Rhs& H_of_t, double t_final, double tol, const char* what,
                   std::size_t min_steps = 64) {
    // integrate i dU/dt = H(t) U from U(0) = 1
    auto run = [&](std::size_t nsteps) {
        Mat U = Mat::Identity();
        const double dt = t_final / static_cast<double>(nsteps);
        for (std::size_t n = 0; n < nsteps; ++n) {
            const double t = n * dt;
            const Mat k1 = -I * (H_of_t(t) * U);
            const Mat k2 = -I * (H_of_t(t + 0.5 * dt) * (U + 0.5 * dt * k1));
            const Mat k3 = -I * (H_of_t(t + 0.5 * dt) * (U + 0.5 * dt * k2));
            const Mat k4 = -I * (H_of_t(t + dt) * (U + dt * k3));
            U += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        return U;
    };

    std::size_t nsteps = std::max<std::size_t>(64, min_steps);
    Mat prev = run(nsteps);
    for (int halving = 0; halving < 20; ++halving) {
        nsteps *= 2;
        Mat cur = run(nsteps);
        const double change = (cur - prev).cwiseAbs().maxCoeff();
        if (change < tol) return cur;
        prev = cur;
    }
    throw std::runtime_error(std::string(what) +
        ": step halving did not converge below tolerance in 20 halvings (stiff system)");
}

} // namespace

Mat2c ode_two_level(const Scenario& s, double z, double p, double t_final, double tol) {
    auto H = [&](double t) {
        const double nu = heisenberg_detuning(s, z, p, t, /*dm_frozen=*/true);
        const double nb = heisenberg_mean(s, z, p, t, /*dm_frozen=*/true);
        Mat2c h;
        h(0, 0) = nb + 0.5 * nu;
        h(1, 1) = nb - 0.5 * nu;
        h(0, 1) = h(1, 0) = 0.5 * s.Omega();
        return h;
    };
    return rk4_propagator<Mat2c>(H, t_final, tol, "ode_two_level");
}

Eigen::Matrix3cd ode_three_level(const Scenario& s, double z, double p,
                                 double t_final, double tol) {
    // evaluate the blocks along the classical free-fall trajectory so the
    // chirp cross term is compensated the same way as in the two-level model
    const HeisenbergTrajectory tr{p, z, s.species.mbar, s.g};
    auto H = [&](double t) {
        Mat3c h = build_rotating_hamiltonian(s, tr.z(t), tr.p(t), t);
        // subtract the e/g common mode: a pure global phase that would
        // otherwise make the integration needlessly stiff over long pulses
        const std::complex<double> mean = 0.5 * (h(1, 1) + h(2, 2));
        h(0, 0) -= mean;
        h(1, 1) -= mean;
        h(2, 2) -= mean;
        return h;
    };
    // resolve the fastest frequency (the ancilla detuning) from the start: a
    // stable but under-resolved RK4 grid damps the fast dressed mode by
    // |R(i w dt)| ~ 1 - (w dt)^6/144 per step at every step count, so the
    // halving check would converge on the damped (wrong) result. Keep the
    // total damping exponent (w t)^6/(144 n^5) below 0.03.
    const double wmax = std::abs(ancilla_detuning(s)) + std::abs(s.delta)
                      + 0.5 * (std::abs(s.laser.Omega_E) + std::abs(s.laser.Omega_B))
                      + std::abs(s.Omega());
    const double wt = wmax * t_final;
    const auto min_steps = static_cast<std::size_t>(
        std::min(1e7, std::pow(std::pow(wt, 6) / (144.0 * 0.03), 0.2)));
    return rk4_propagator<Eigen::Matrix3cd>(H, t_final, tol, "ode_three_level",
                                            min_steps);
}

// ---------------------------------------------------------------------------
// Grid solver
// ---------------------------------------------------------------------------

namespace {
std::mutex fftw_planner_mutex;
}

struct GridEvolver::Impl {
    const Scenario s;
    GridSpec grid;
    std::size_t N;
    double L;

    std::vector<double> z, pgrid;
    std::vector<cplx> buf;       // FFT work buffer
    fftw_plan fwd = nullptr, bwd = nullptr;

    Impl(const Scenario& sc, const GridSpec& gs) : s(sc), grid(gs), N(gs.points) {
        if (N == 0 || (N & (N - 1)) != 0)
            throw std::invalid_argument("GridSpec: points must be a power of two");
        L = grid.extent;
        buf.resize(N);
        z.resize(N);
        pgrid.resize(N);
        std::lock_guard<std::mutex> lock(fftw_planner_mutex);
        fwd = fftw_plan_dft_1d(static_cast<int>(N),
                               reinterpret_cast<fftw_complex*>(buf.data()),
                               reinterpret_cast<fftw_complex*>(buf.data()),
                               FFTW_FORWARD, FFTW_ESTIMATE);
        bwd = fftw_plan_dft_1d(static_cast<int>(N),
                               reinterpret_cast<fftw_complex*>(buf.data()),
                               reinterpret_cast<fftw_complex*>(buf.data()),
                               FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    ~Impl() {
        std::lock_guard<std::mutex> lock(fftw_planner_mutex);
        if (fwd) fftw_destroy_plan(fwd);
        if (bwd) fftw_destroy_plan(bwd);
    }

    void setup_axes(double z0_g, double z0_e, double sigma) {
        if (grid.extent <= 0.0)
            L = 36.0 / sigma + std::abs(z0_g) + std::abs(z0_e) + 40.0;
        const double dz = L / static_cast<double>(N);
        for (std::size_t j = 0; j < N; ++j)
            z[j] = (static_cast<double>(j) - 0.5 * static_cast<double>(N)) * dz;
        for (std::size_t j = 0; j < N; ++j) {
            const double f = (j < N / 2) ? static_cast<double>(j)
                                         : static_cast<double>(j) - static_cast<double>(N);
            pgrid[j] = 2.0 * M_PI * f / L;
        }
    }

    // spatial (z-dependent) part of the laser phase
    double phiL_spatial(double zv, double t) const {
        if (s.ch.wv)
            return s.laser.k * zv * (1.0 + s.laser.alpha * t / s.c
                                     - (s.g + s.laser.alpha) * zv / (2.0 * s.c * s.c));
        return s.laser.k * zv;
    }

    void fft(std::vector<cplx>& v) {
        std::memcpy(buf.data(), v.data(), N * sizeof(cplx));
        fftw_execute(fwd);
        std::memcpy(v.data(), buf.data(), N * sizeof(cplx));
    }
    void ifft(std::vector<cplx>& v) {
        std::memcpy(buf.data(), v.data(), N * sizeof(cplx));
        fftw_execute(bwd);
        const double inv = 1.0 / static_cast<double>(N);
        for (std::size_t j = 0; j < N; ++j) v[j] = buf[j] * inv;
    }
};

GridEvolver::GridEvolver(const Scenario& s, const GridSpec& grid)
    : impl_(new Impl(s, grid)) {}
GridEvolver::~GridEvolver() { delete impl_; }

OracleResult GridEvolver::evolve(InternalState start, double p0, double z0,
                                 double sigma, double t_final) {
    Impl& im = *impl_;
    const Scenario& s = im.s;
    const std::size_t N = im.N;
    im.setup_axes(z0, z0, sigma);
    const double dz = im.L / static_cast<double>(N);

    std::vector<cplx> psi_e(N, cplx(0.0)), psi_g(N, cplx(0.0));
    {
        const double norm0 = std::pow(sigma * sigma / M_PI, 0.25);
        std::vector<cplx>& tgt = (start == InternalState::e) ? psi_e : psi_g;
        for (std::size_t j = 0; j < N; ++j) {
            const double u = im.z[j] - z0;
            tgt[j] = norm0 * std::exp(cplx(-0.5 * sigma * sigma * u * u, p0 * u));
        }
    }
    // U_rot^dag(0): spatial laser phase -/+ phiL(z,0)/2 on e/g
    for (std::size_t j = 0; j < N; ++j) {
        const double ph = 0.5 * im.phiL_spatial(im.z[j], 0.0);
        psi_e[j] *= std::exp(cplx(0.0, -ph));
        psi_g[j] *= std::exp(cplx(0.0, +ph));
    }

    const double c2 = s.c * s.c;
    const double me0 = s.species.mbar + (s.ch.md ? 0.5 * s.species.omega_eg / c2 : 0.0);
    const double mg0 = s.species.mbar - (s.ch.md ? 0.5 * s.species.omega_eg / c2 : 0.0);
    const double we_dyn = me0 * c2;   // hbar omega per unit dilaton coupling
    const double wg_dyn = mg0 * c2;
    const double k = s.laser.k, al = s.laser.alpha, g = s.g;
    const double halfOm = 0.5 * s.Omega();
    const double kappa1 = s.ch.wv ? -0.5 * k * (g + al) / c2 : 0.0;
    const bool have_mixed = (kappa1 != 0.0)
        || ((s.ch.dm || s.ch.ep) && (s.species.beta_e != 0.0 || s.species.beta_g != 0.0));

    const std::size_t nsteps = im.grid.steps;
    const double dt = t_final / static_cast<double>(nsteps);

    std::vector<double> de(N), dg(N), rho(N), kap(N);
    std::vector<cplx> E00(N), E11(N), E01(N);
    std::vector<cplx> tmp1(N), tmp2(N), h1(N), h2(N);

    auto half_zstep = [&](void) {
        for (std::size_t j = 0; j < N; ++j) {
            const double a = de[j], b = dg[j];
            const double d = 0.5 * (a - b);
            const double th = std::sqrt(d * d + halfOm * halfOm);
            const double mean = 0.5 * (a + b);
            const cplx ph = std::exp(cplx(0.0, -0.5 * dt * mean));
            const double ct = std::cos(0.5 * dt * th);
            const double st = std::sin(0.5 * dt * th);
            const double sinc = (th > 1e-300) ? st / th : 0.5 * dt;
            E00[j] = ph * cplx(ct, -d * sinc);
            E11[j] = ph * cplx(ct, +d * sinc);
            E01[j] = ph * cplx(0.0, -halfOm * sinc);
        }
        for (std::size_t j = 0; j < N; ++j) {
            const cplx ce = psi_e[j], cg = psi_g[j];
            psi_e[j] = E00[j] * ce + E01[j] * cg;
            psi_g[j] = E01[j] * ce + E11[j] * cg;
        }
    };

    // mixed z-p generator: sym(W1(z), p)/1 + sym(W2(z), (p +/- kap0)^2),
    // applied through a second-order Taylor step of duration dtm
    auto apply_mixed = [&](double dtm, double tm, double kap0) {
        if (!have_mixed) return;
        for (int ic = 0; ic < 2; ++ic) {
            const double m0 = (ic == 0) ? me0 : mg0;
            const double bj = (ic == 0) ? s.species.beta_e : s.species.beta_g;
            const double sgn = (ic == 0) ? +1.0 : -1.0;
            std::vector<cplx>& f = (ic == 0) ? psi_e : psi_g;

            auto Hx = [&](const std::vector<cplx>& v, std::vector<cplx>& out) {
                // out = 0.5*(W1 * (p v) + p (W1 v)) + 0.5*(W2 * (q2 v) + q2 (W2 v))
                // where q2 = (p + sgn*kap0)^2
                tmp1 = v;
                im.fft(tmp1);
                tmp2 = tmp1;
                for (std::size_t j = 0; j < N; ++j) tmp1[j] *= im.pgrid[j];
                im.ifft(tmp1);                       // tmp1 = p v
                for (std::size_t j = 0; j < N; ++j) {
                    const double q = im.pgrid[j] + sgn * kap0;
                    tmp2[j] *= q * q;
                }
                im.ifft(tmp2);                       // tmp2 = q2 v
                for (std::size_t j = 0; j < N; ++j) {
                    const double W1 = kappa1 / m0 * im.z[j] * sgn;
                    const double W2 = -bj * rho[j] / (2.0 * m0);
                    out[j] = 0.5 * (W1 * tmp1[j] + W2 * tmp2[j]);
                    tmp1[j] = W1 * v[j];
                    tmp2[j] = W2 * v[j];
                }
                im.fft(tmp1);
                for (std::size_t j = 0; j < N; ++j) tmp1[j] *= im.pgrid[j];
                im.ifft(tmp1);
                im.fft(tmp2);
                for (std::size_t j = 0; j < N; ++j) {
                    const double q = im.pgrid[j] + sgn * kap0;
                    tmp2[j] *= q * q;
                }
                im.ifft(tmp2);
                for (std::size_t j = 0; j < N; ++j)
                    out[j] += 0.5 * (tmp1[j] + tmp2[j]);
            };

            (void)tm;
            Hx(f, h1);
            Hx(h1, h2);
            for (std::size_t j = 0; j < N; ++j)
                f[j] = f[j] - I * dtm * h1[j] - 0.5 * dtm * dtm * h2[j];
        }
    };

    for (std::size_t n = 0; n < nsteps; ++n) {
        const double tm = (static_cast<double>(n) + 0.5) * dt;
        const double kap0 = 0.5 * k * (1.0 + (s.ch.wv ? al * tm / s.c : 0.0));
        for (std::size_t j = 0; j < N; ++j) {
            rho[j] = s.rho_full(im.z[j], tm);
            kap[j] = kap0 + kappa1 * im.z[j];
        }
        const double chirp_t = -0.5 * k * al * tm;
        for (std::size_t j = 0; j < N; ++j) {
            const double chirp_z = s.ch.wv ? 0.5 * k * al * im.z[j] / s.c : 0.0;
            de[j] = we_dyn * s.species.beta_e * rho[j] + kap[j] * kap[j] / (2.0 * me0)
                  + me0 * (1.0 + s.species.beta_e * rho[j]) * g * im.z[j]
                  + chirp_z + chirp_t
                  + s.eff.obar_ac + 0.5 * (s.delta + s.eff.domega_ac);
            dg[j] = wg_dyn * s.species.beta_g * rho[j] + kap[j] * kap[j] / (2.0 * mg0)
                  + mg0 * (1.0 + s.species.beta_g * rho[j]) * g * im.z[j]
                  - chirp_z - chirp_t
                  + s.eff.obar_ac - 0.5 * (s.delta + s.eff.domega_ac);
        }

        half_zstep();
        apply_mixed(0.5 * dt, tm, kap0);

        // kinetic step: p^2/(2 m_j0) + p kap0/m_j0 (the kap^2 part lives in
        // the position-diagonal step through kap(z,t)^2)
        im.fft(psi_e);
        im.fft(psi_g);
        for (std::size_t j = 0; j < N; ++j) {
            const double pe = im.pgrid[j];
            const double ke = (pe + kap0) * (pe + kap0) / (2.0 * me0) - kap0 * kap0 / (2.0 * me0);
            const double kg = (pe - kap0) * (pe - kap0) / (2.0 * mg0) - kap0 * kap0 / (2.0 * mg0);
            psi_e[j] *= std::exp(cplx(0.0, -dt * ke));
            psi_g[j] *= std::exp(cplx(0.0, -dt * kg));
        }
        im.ifft(psi_e);
        im.ifft(psi_g);

        apply_mixed(0.5 * dt, tm, kap0);
        half_zstep();
    }

    // final U_rot(t): spatial laser phase +/- phiL(z,t)/2 on e/g
    for (std::size_t j = 0; j < N; ++j) {
        const double ph = 0.5 * im.phiL_spatial(im.z[j], t_final);
        psi_e[j] *= std::exp(cplx(0.0, +ph));
        psi_g[j] *= std::exp(cplx(0.0, -ph));
    }

    OracleResult r;
    r.zgrid.assign(im.z.begin(), im.z.end());
    r.extent = im.L;
    r.steps = nsteps;

    double ne = 0.0, ng = 0.0, peak = 0.0, edge = 0.0;
    for (std::size_t j = 0; j < N; ++j) {
        const double d = std::norm(psi_e[j]) + std::norm(psi_g[j]);
        ne += std::norm(psi_e[j]);
        ng += std::norm(psi_g[j]);
        peak = std::max(peak, d);
        if (j < 8 || j >= N - 8) edge = std::max(edge, d);
    }
    r.norm = (ne + ng) * dz;
    r.boundary_leak = (peak > 0.0) ? edge / peak : 0.0;
    r.transfer = (start == InternalState::g) ? ne / (ne + ng) : ng / (ne + ng);
    r.psi_e = std::move(psi_e);
    r.psi_g = std::move(psi_g);

    if (im.grid.snapshot && !im.grid.snapshot_path.empty())
        write_snapshot(r, im.grid.snapshot_path);
    return r;
}

std::complex<double> GridEvolver::amp_at(const OracleResult& r, InternalState which,
                                         double p_lab, double /*t_final*/) const {
    const std::vector<cplx>& psi = (which == InternalState::e) ? r.psi_e : r.psi_g;
    const std::size_t N = psi.size();
    const double dz = r.extent / static_cast<double>(N);
    cplx acc(0.0);
    for (std::size_t j = 0; j < N; ++j)
        acc += psi[j] * std::exp(cplx(0.0, -p_lab * r.zgrid[j]));
    return acc * dz / std::sqrt(2.0 * M_PI);
}

GridPhaseResult grid_mirror_phase(const Scenario& s, const GaussianWavePacket& pk,
                                  double p_eval, double t, const GridSpec& grid) {
    GridEvolver ev(s, grid);
    const OracleResult run_g = ev.evolve(InternalState::g, pk.p_g, pk.z_g, pk.sigma_g, t);
    const OracleResult run_e = ev.evolve(InternalState::e, pk.p_e, pk.z_e, pk.sigma_e, t);

    const cplx amp_eg = ev.amp_at(run_g, InternalState::e, p_eval + s.laser.k, t);
    const cplx amp_ge = ev.amp_at(run_e, InternalState::g, p_eval, t);

    GridPhaseResult out;
    const double scalar = -2.0 * s.laser.phi0
        - s.laser.omega_L * t * (1.0 + s.laser.alpha * t / (2.0 * s.c));
    out.phi_pi = std::arg(amp_eg) - std::arg(amp_ge) + scalar;
    out.amp_eg = std::abs(amp_eg);
    out.amp_ge = std::abs(amp_ge);
    out.norm_eg = run_g.norm;
    out.norm_ge = run_e.norm;
    out.boundary_leak = std::max(run_g.boundary_leak, run_e.boundary_leak);
    return out;
}

double grid_transfer(const Scenario& s, double p0, double z0, double sigma,
                     double t, const GridSpec& grid) {
    GridEvolver ev(s, grid);
    return ev.evolve(InternalState::g, p0, z0, sigma, t).transfer;
}

void write_snapshot(const OracleResult& r, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("write_snapshot: cannot open " + path);
    f.write("SPDF", 4);
    const std::uint32_t version = 1;
    const std::uint64_t points = r.psi_e.size();
    f.write(reinterpret_cast<const char*>(&version), sizeof version);
    f.write(reinterpret_cast<const char*>(&points), sizeof points);
    f.write(reinterpret_cast<const char*>(&r.extent), sizeof r.extent);
    auto dump = [&f](const std::vector<cplx>& v) {
        for (const cplx& a : v) {
            const double re = a.real(), im = a.imag();
            f.write(reinterpret_cast<const char*>(&re), sizeof re);
            f.write(reinterpret_cast<const char*>(&im), sizeof im);
        }
    };
    dump(r.psi_e);
    dump(r.psi_g);
    if (!f) throw std::runtime_error("write_snapshot: write failed for " + path);
}

} // namespace spdiff

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "spdiff/propagator.hpp"
#include "spdiff/oracle.hpp"
#include "helpers.hpp"

#include <functional>
#include <random>

using namespace spdiff;
using namespace spdiff::testing;

namespace {

// adaptive Simpson quadrature
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-13, int depth = 30) {
    std::function<double(double, double, double, double, double, double, int)> rec =
        [&](double lo, double hi, double flo, double fmid, double fhi, double whole,
            int d) -> double {
        const double m = 0.5 * (lo + hi);
        const double lm = 0.5 * (lo + m), rm = 0.5 * (m + hi);
        const double flm = f(lm), frm = f(rm);
        const double left = (m - lo) / 6.0 * (flo + 4.0 * flm + fmid);
        const double right = (hi - m) / 6.0 * (fmid + 4.0 * frm + fhi);
        if (d <= 0 || std::abs(left + right - whole) < 15.0 * tol)
            return left + right + (left + right - whole) / 15.0;
        return rec(lo, m, flo, flm, fmid, left, d - 1)
             + rec(m, hi, fmid, frm, fhi, right, d - 1);
    };
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return rec(a, b, fa, fm, fb, whole, depth);
}

// quadrature forms of the first-order pulse coefficients for a detuning ~ tau^j:
//   eta_j = Omega^{j+1} [cos(phi_t) C_j + sin(phi_t) S_j]
//   xi_j  = Omega^{j+1} [sin(phi_t) C_j - cos(phi_t) S_j]
// with C_j = int_0^t tau^j cos(Omega tau) dtau, S_j analogous with sin.
DysonCoefficients quadrature_coefficients(int j, double phi_t, double Omega) {
    const double t = 2.0 * phi_t / Omega;
    const double C = adaptive_simpson(
        [&](double tau) { return std::pow(tau, j) * std::cos(Omega * tau); }, 0.0, t);
    const double S = adaptive_simpson(
        [&](double tau) { return std::pow(tau, j) * std::sin(Omega * tau); }, 0.0, t);
    const double Oj = std::pow(Omega, j + 1);
    return {Oj * (std::cos(phi_t) * C + std::sin(phi_t) * S),
            Oj * (std::sin(phi_t) * C - std::cos(phi_t) * S)};
}

} // namespace

TEST_CASE("pulse coefficients: spot values") {
    CHECK(dyson_coefficients(0, 0.123).xi == 0.0);
    CHECK(dyson_coefficients(0, 1.9).xi == 0.0);
    CHECK(dyson_coefficients(0, 0.5 * M_PI).eta == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(dyson_coefficients(1, 0.5 * M_PI).xi == doctest::Approx(-2.0).epsilon(1e-15));
    CHECK_THROWS_AS(dyson_coefficients(4, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(dyson_coefficients(-1, 1.0), std::invalid_argument);
}

TEST_CASE("pulse coefficient closed forms match adaptive quadrature") {
    for (double Omega : {1.0, 2.7}) {
        for (int i = 1; i <= 12; ++i) {
            const double phi_t = 0.5 * M_PI * i / 12.0;
            for (int j = 0; j < 4; ++j) {
                const DysonCoefficients cf = dyson_coefficients(j, phi_t);
                const DysonCoefficients q = quadrature_coefficients(j, phi_t, Omega);
                CHECK(std::abs(cf.eta - q.eta) <= 1e-10);
                CHECK(std::abs(cf.xi - q.xi) <= 1e-10);
            }
        }
    }
}

TEST_CASE("pulse coefficient small-angle limits") {
    for (int j : {0, 1}) {
        CHECK(std::abs(dyson_coefficients(j, 1e-8).eta) <= 1e-7);
    }
}

TEST_CASE("propagator: unperturbed limits") {
    Scenario s = make_toy(); // perfect chirp, channels off
    const double T = M_PI / s.Omega();
    const Mat2c U = propagate_heisenberg(s, 0.5, s.p_r, T);
    CHECK(std::norm(U(0, 1)) == doctest::Approx(1.0).epsilon(1e-12)); // |U_eg|^2 = sin^2
    CHECK(std::abs(U(0, 0)) <= 1e-12);

    const Mat2c I2 = propagate_heisenberg(s, 0.5, s.p_r, 0.0);
    CHECK((I2 - Mat2c::Identity()).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("constant detuning vs generalized Rabi closed form") {
    Scenario s = make_toy();
    const double Om = s.Omega(), eps = 1e-3;
    const double nu = eps * Om;
    // constant detuning via velocity selectivity: evaluate off resonance
    const double p = s.p_r + nu * s.species.mbar / s.laser.k;
    const double T = M_PI / Om;
    const Mat2c U = propagate_heisenberg(s, 0.3, p, T);
    // exact two-level propagator for H = (nu sigma_z + Omega sigma_x)/2
    const double W = std::sqrt(Om * Om + nu * nu);
    const std::complex<double> I(0.0, 1.0);
    const double ct = std::cos(0.5 * W * T), st = std::sin(0.5 * W * T);
    const std::complex<double> exact_ee = ct - I * (nu / W) * st;
    const std::complex<double> exact_eg = -I * (Om / W) * st;
    CHECK(std::abs(std::abs(U(0, 0)) - std::abs(exact_ee)) <= 5.0 * eps * eps);
    CHECK(std::abs(U(0, 1) - exact_eg) <= 5.0 * eps * eps);
}

TEST_CASE("unitarity defect scales quadratically in the guard parameter") {
    std::mt19937_64 rng(31);
    std::vector<double> lx, ly;
    for (int i = 0; i < 40; ++i) {
        const double eps = std::pow(10.0, -4.0 + 2.0 * i / 39.0);
        Scenario s = make_random_perturbed(rng, eps);
        const double T = M_PI / s.Omega();
        const PolynomialDetuning co = detuning_coefficients(s, 0.5, 0.2);
        double actual_eps = 0.0;
        for (int j = 0; j < 4; ++j)
            actual_eps = std::max(actual_eps,
                                  std::abs(co.nu[j]) * std::pow(T, j) / s.Omega());
        if (actual_eps < 1e-6) continue;
        const Mat2c U = propagate_heisenberg(s, 0.5, 0.2, T);
        const double defect = (U.adjoint() * U - Mat2c::Identity()).cwiseAbs().maxCoeff();
        if (defect <= 0.0) continue;
        lx.push_back(std::log(actual_eps));
        ly.push_back(std::log(defect));
    }
    REQUIRE(lx.size() >= 20);
    // least-squares slope
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) { mx += lx[i]; my += ly[i]; }
    mx /= lx.size(); my /= ly.size();
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        num += (lx[i] - mx) * (ly[i] - my);
        den += (lx[i] - mx) * (lx[i] - mx);
    }
    const double slope = num / den;
    CHECK(slope == doctest::Approx(2.0).epsilon(0.15 / 2.0));
}

TEST_CASE("lambda symmetry: the nu-proportional diagonal parts are opposite") {
    std::mt19937_64 rng(5);
    Scenario s = make_random_perturbed(rng, 1e-3);
    const double T = M_PI / s.Omega();
    const Mat2c U = propagate_heisenberg(s, 0.4, 0.2, T);
    const double phi_t = 0.5 * s.Omega() * T;
    // U_ee + U_gg = 2 cos(phi_t) [1 - i nubar-sum]: the lambda parts cancel
    const PolynomialDetuning co = detuning_coefficients(s, 0.4, 0.2);
    std::complex<double> mean(1.0, 0.0);
    double acc = 0.0, tp = T;
    for (int j = 0; j < 4; ++j) { acc += co.nubar[j] * tp / (j + 1); tp *= T; }
    mean -= std::complex<double>(0.0, acc);
    const std::complex<double> sum = U(0, 0) + U(1, 1);
    CHECK(std::abs(sum - 2.0 * std::cos(phi_t) * mean) <= 1e-14);
    // and U_ee - U_gg is purely the lambda-weighted eta sum (negates under swap)
    const std::complex<double> diff = U(0, 0) - U(1, 1);
    CHECK(std::abs(diff.real()) <= 1e-14); // i * real eta sum is imaginary
}

TEST_CASE("Schroedinger reassembly: momentum kick and resonant transfer") {
    Scenario s = make_toy();
    const GaussianWavePacket pk = make_packet(s);
    const double T = M_PI / s.Omega();

    // ground-state input, pi pulse: output support around p_g + hbar k
    const auto at = [&](double p_out) {
        return std::abs(propagate_schroedinger(s, pk, InternalState::g,
                                               InternalState::e, p_out, T)
                            .envelope);
    };
    const double peak = at(pk.p_g + s.laser.k - s.species.mbar * s.g * T);
    CHECK(peak == doctest::Approx(1.0).epsilon(1e-10)); // full transfer, envelope 1
    CHECK(at(pk.p_g + s.laser.k - s.species.mbar * s.g * T + 3.0) < 1e-7);

    // transfer probability at the packet center
    const double pev = eval_momentum(s, T);
    const auto a = propagate_schroedinger(s, pk, InternalState::g, InternalState::e,
                                          pev + s.laser.k, T);
    CHECK(std::norm(a.envelope) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("internal cross-check: propagator phase difference vs budget") {
    Scenario s = make_toy();
    s.laser.phi0 = 0.4;
    const GaussianWavePacket pk = make_packet(s);
    const double T = M_PI / s.Omega();
    const double pev = eval_momentum(s, T);
    const double via_propagator = phase_difference_pi(s, pk, pev, T);
    const PhaseBudget b = mirror_phase_budget(s, pk, pev, T);
    CHECK(std::abs(std::remainder(via_propagator - b.total(), 2.0 * M_PI)) <= 1e-8);

    // small chirp mismatch: the 2k(g+alpha)/Omega^2 term appears in both paths
    Scenario sm = s;
    sm.laser.alpha = -s.g + 1e-5;
    const double d2 = std::remainder(phase_difference_pi(sm, pk, pev, T)
                                     - mirror_phase_budget(sm, pk, pev, T).total(),
                                     2.0 * M_PI);
    CHECK(std::abs(d2) <= 1e-8);
}

TEST_CASE("symbolic Compton bookkeeping cancels in differences") {
    Scenario s = make_toy();
    const GaussianWavePacket pk = make_packet(s);
    const double T = M_PI / s.Omega();
    const auto a_eg = propagate_schroedinger(s, pk, InternalState::g, InternalState::e,
                                             0.7, T);
    const auto a_ge = propagate_schroedinger(s, pk, InternalState::e, InternalState::g,
                                             0.7, T);
    CHECK(a_eg.omega_bar_coeff + a_ge.omega_bar_coeff == 0);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "spdiff/threelevel.hpp"
#include "helpers.hpp"

using namespace spdiff;
using namespace spdiff::testing;

TEST_CASE("laser_phase: trivial limits and arithmetic") {
    LaserField l;
    l.k = 3.0;
    l.omega_L = 30.0;
    l.phi0 = 0.7;
    CHECK(l.laser_phase(0.0, 0.0, 9.81, 10.0) == doctest::Approx(-0.7).epsilon(1e-15));

    LaserField plane;
    plane.k = 2.0;
    plane.omega_L = 20.0;
    CHECK(plane.laser_phase(1.5, 0.25, 0.0, 10.0) ==
          doctest::Approx(2.0 * 1.5 - 20.0 * 0.25).epsilon(1e-15));

    LaserField toy;
    toy.k = 1.0;
    toy.omega_L = 10.0;
    toy.alpha = -1.0; // alpha = -g with g = 1
    CHECK(toy.laser_phase(1.0, 1.0, 1.0, 10.0) ==
          doctest::Approx(1.0 * (1.0 - 0.1) - 10.0 * (1.0 - 0.05)).epsilon(1e-14));
}

TEST_CASE("rwa_validity: ratio behavior") {
    LaserField l;
    l.k = 1.0;
    l.omega_L = 1e15;
    l.Omega_E = 1e5;
    CHECK(l.rwa_validity(0.0, 0.0, 1e15) == doctest::Approx(1e10).epsilon(1e-12));

    // monotone in omega_L at z=0, alpha=0
    double prev = 0.0;
    for (double w : {1e10, 1e12, 1e14}) {
        LaserField m;
        m.k = 1.0;
        m.omega_L = w;
        m.Omega_E = 1e5;
        const double r = m.rwa_validity(0.0, 0.0, w);
        CHECK(r > prev);
        prev = r;
    }

    LaserField bad;
    bad.k = 1.0;
    bad.omega_L = 1.0;
    CHECK_THROWS_AS(bad.rwa_validity(0.0, 0.0, 1.0), std::domain_error);
}

TEST_CASE("dispersion validation") {
    LaserField l;
    l.k = 1.0;
    l.omega_L = 200.0;
    CHECK_NOTHROW(l.validate(200.0));
    l.omega_L = 200.1;
    CHECK_THROWS_AS(l.validate(200.0), std::invalid_argument);
}

TEST_CASE("build_rotating_hamiltonian: diagonal without coupling, Hermitian") {
    Scenario s = make_magnetic(0.2, 0.2, 40.0);
    const Mat3c H = build_rotating_hamiltonian(s, 0.3, 0.1, 0.2);
    CHECK((H - H.adjoint()).cwiseAbs().maxCoeff() <= 1e-14);

    Scenario diag = s;
    diag.laser.Omega_E = diag.laser.Omega_B = 0.0;
    const Mat3c D = build_rotating_hamiltonian(diag, 0.3, 0.1, 0.2);
    CHECK(std::abs(D(0, 1)) == 0.0);
    CHECK(std::abs(D(0, 2)) == 0.0);
    CHECK(std::abs(D(1, 2)) == 0.0);
}

TEST_CASE("unperturbed resonance: nu_e + delta/2 - (nu_g - delta/2) = 0 at p_r") {
    Scenario s = make_toy();
    // channels off, t = 0; the e<->g block difference must vanish at p = p_r
    const double z = 1.3;
    const double diff = nu_block(s, Level::e, z, s.p_r, 0.0) + 0.5 * s.delta
                      - (nu_block(s, Level::g, z, s.p_r, 0.0) - 0.5 * s.delta);
    CHECK(std::abs(diff) <= 1e-12);
}

TEST_CASE("1/c and 1/c^2 corrections scale exactly with c") {
    // comparing the wave-vector correction terms at c and 10c with the
    // dimensionless parameters held fixed
    Scenario s1 = make_toy(1.0, 0.1, 200.0);
    s1.ch.wv = true;
    s1.laser.alpha = 0.0; // imperfect chirp so (g+alpha) terms are alive
    Scenario s10 = s1;
    s10.c = 2000.0;
    // keep k identical so only the 1/c factors differ
    s10.laser.omega_L = s1.laser.k * s10.c;
    s10.laser.k = s1.laser.k;

    const double z = 1.0, t = 0.7;
    const double k1 = s1.laser.kappa(z, t, s1.g, s1.c) - 0.5 * s1.laser.k;
    const double k10 = s10.laser.kappa(z, t, s10.g, s10.c) - 0.5 * s10.laser.k;
    // kappa - k/2 = k(alpha t/c - (g+alpha) z/c^2)/2; alpha=0 leaves the pure
    // 1/c^2 part, which must shrink by exactly 100x
    // kappa - k/2 is a small difference of near-equal numbers; cancellation
    // limits the achievable agreement
    CHECK(k1 / k10 == doctest::Approx(100.0).epsilon(1e-8));

    Scenario s1c = s1, s10c = s10;
    s1c.laser.alpha = -2.0 * s1.g; // now alpha != 0: mixed 1/c + 1/c^2
    s10c.laser.alpha = s1c.laser.alpha;
    const double a1 = 0.5 * s1c.laser.k * s1c.laser.alpha * t / s1c.c;
    const double a10 = 0.5 * s10c.laser.k * s10c.laser.alpha * t / s10c.c;
    CHECK(a1 / a10 == doctest::Approx(10.0).epsilon(1e-12));
}

TEST_CASE("kappa is z-independent at perfect chirping") {
    Scenario s = make_toy();
    s.ch.wv = true; // alpha = -g from the builder
    const double t = 0.4;
    const double h = 1e-3;
    const double dkdz = (s.laser.kappa(1.0 + h, t, s.g, s.c)
                       - s.laser.kappa(1.0 - h, t, s.g, s.c)) / (2.0 * h);
    CHECK(std::abs(dkdz) <= 1e-14);
}

TEST_CASE("ancilla detuning is derived, not stored") {
    Scenario s = make_magnetic(0.2, 0.2, 40.0);
    // Delta is recovered by subtracting Compton-scale frequencies, so the
    // relative accuracy is limited by |omega_bar/Delta| * 1e-16
    CHECK(ancilla_detuning(s) == doctest::Approx(40.0).epsilon(1e-9));
    set_ancilla_detuning(s, 55.0);
    CHECK(ancilla_detuning(s) == doctest::Approx(55.0).epsilon(1e-9));
}

TEST_CASE("displaced momentum: +/- kappa, reduces to k/2 without wv channel") {
    Scenario s = make_toy();
    const double p = 0.3, z = 1.0, t = 0.2;
    CHECK(displaced_momentum(s, Level::e, z, p, t) == p + 0.5 * s.laser.k);
    CHECK(displaced_momentum(s, Level::g, z, p, t) == p - 0.5 * s.laser.k);
    s.ch.wv = true;
    CHECK(displaced_momentum(s, Level::e, z, p, t) ==
          p + s.laser.kappa(z, t, s.g, s.c));
}

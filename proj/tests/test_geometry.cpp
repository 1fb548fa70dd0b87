#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "crpower/geometry.hpp"
#include "crpower/rng.hpp"
#include "crpower/validation.hpp"

using namespace crpower;

TEST_CASE("lens_area closed-form cases") {
    CHECK(lens_area(0, 1, 1) == Catch::Approx(kPi).epsilon(1e-14));
    CHECK(lens_area(2, 1, 1) == 0.0);
    CHECK(lens_area(5, 1, 1) == 0.0);
    CHECK(lens_area(0.2, 0.5, 3) == Catch::Approx(kPi * 0.25).epsilon(1e-14));
    // unit circles one radius apart: 2*pi/3 - sqrt(3)/2
    CHECK(lens_area(1, 1, 1) ==
          Catch::Approx(2 * kPi / 3 - std::sqrt(3.0) / 2).epsilon(1e-14));
}

TEST_CASE("lens_area dart-throwing oracle") {
    double area = 0, se = 0;
    validation_detail::lens_dart_oracle(1.0, 1.0, 1.0, 10'000'000, 99, area, se);
    CHECK(std::abs(lens_area(1, 1, 1) - area) <= 3 * se);
    validation_detail::lens_dart_oracle(0.6, 0.8, 1.1, 10'000'000, 7, area, se);
    CHECK(std::abs(lens_area(0.6, 0.8, 1.1) - area) <= 3 * se);
}

TEST_CASE("lens_area symmetry, monotonicity, continuity") {
    CounterRng rng(11, 0);
    for (int i = 0; i < 100; ++i) {
        const double r1 = rng.uniform(0.1, 3.0);
        const double r2 = rng.uniform(0.1, 3.0);
        const double d = rng.uniform(0.0, r1 + r2 + 1);
        CHECK(lens_area(d, r1, r2) == lens_area(d, r2, r1));  // exact
    }
    // nonincreasing in d
    double prev = 1e300;
    for (int i = 0; i <= 60; ++i) {
        const double v = lens_area(0.05 * i, 1.0, 1.4);
        CHECK(v <= prev + 1e-14);
        prev = v;
    }
    // continuity at |r1-r2| and r1+r2
    const double eps = 1e-9;
    CHECK(lens_area(0.4 - eps, 1.0, 1.4) ==
          Catch::Approx(lens_area(0.4 + eps, 1.0, 1.4)).margin(1e-6));
    CHECK(lens_area(2.4 - eps, 1.0, 1.4) ==
          Catch::Approx(0.0).margin(1e-6));
}

TEST_CASE("annulus_angle_outside cases") {
    CHECK(annulus_angle_outside(1, 10, 2) == 2 * kPi);   // ring misses disk
    CHECK(annulus_angle_outside(1, 0.5, 5) == 0.0);      // ring inside disk
    // r = d = R: theta0 = acos(1/2), outside angle = 2(pi - pi/3) = 4pi/3
    CHECK(annulus_angle_outside(1, 1, 1) ==
          Catch::Approx(4 * kPi / 3).epsilon(1e-13));
    CHECK(annulus_angle_outside(0.5, 0, 1) == 0.0);      // d = 0 branches
    CHECK(annulus_angle_outside(2, 0, 1) == 2 * kPi);
}

TEST_CASE("annulus_angle_outside agrees with angular sampling") {
    const struct { double r, d, R; } tuples[] = {
        {1.0, 1.0, 1.0}, {1.3, 0.7, 1.0}, {2.0, 1.5, 1.0}, {0.8, 1.2, 0.9}};
    for (const auto& t : tuples) {
        const int n = 1'000'000;
        int outside = 0;
        for (int i = 0; i < n; ++i) {
            const double th = 2 * kPi * (i + 0.5) / n;
            const double x = t.r * std::cos(th) - t.d;
            const double y = t.r * std::sin(th);
            if (x * x + y * y > t.R * t.R) ++outside;
        }
        const double sampled = 2 * kPi * outside / n;
        CHECK(annulus_angle_outside(t.r, t.d, t.R) ==
              Catch::Approx(sampled).margin(2 * kPi * 2e-5));
    }
}

TEST_CASE("annulus angle integrates to the masked-disk area") {
    const struct { double d, rho, R; } tuples[] = {
        {1.0, 2.0, 1.5}, {0.3, 1.1, 0.8}, {2.5, 2.0, 1.0}};
    for (const auto& t : tuples) {
        const auto f = [&](double r) {
            return r * annulus_angle_outside(r, t.d, t.R);
        };
        const double got =
            integrate(f, 0.0, t.rho, {std::abs(t.d - t.R), t.d + t.R});
        const double want = kPi * t.rho * t.rho - lens_area(t.d, t.rho, t.R);
        CHECK(got == Catch::Approx(want).epsilon(1e-8));
    }
}

TEST_CASE("disk_convolution closed form") {
    // saturation past R_p + r_I
    CHECK(disk_convolution(3.0, 2.0, 1.0) ==
          Catch::Approx(kPi * 1.0).epsilon(1e-14));
    CHECK(disk_convolution(7.5, 2.0, 1.0) ==
          Catch::Approx(kPi * 1.0).epsilon(1e-14));
    // inner case: pi r^2 * (r_I/R_p)^2 for r <= |R_p - r_I|
    CHECK(disk_convolution(0.5, 2.0, 1.0) ==
          Catch::Approx(kPi * 0.25 * 0.25).epsilon(1e-14));
    // middle case against the defining radial integral (frozen from an
    // adaptive-quadrature evaluation of 2*pi*int t*lens(t,2,1)/(4*pi) dt)
    CHECK(disk_convolution(2.0, 2.0, 1.0) ==
          Catch::Approx(2.4791210522005929).epsilon(1e-12));
}

TEST_CASE("disk_convolution vs quadrature on random tuples") {
    CounterRng rng(5, 1);
    for (int i = 0; i < 20; ++i) {
        const double R_p = rng.uniform(0.3, 2.5);
        const double r_I = rng.uniform(0.3, 2.5);
        const double r = rng.uniform(0.05, R_p + r_I + 0.5);
        const auto f = [&](double t) {
            return 2 * kPi * t * lens_area(t, R_p, r_I) / (kPi * R_p * R_p);
        };
        QuadratureConfig tight;
        tight.rel_tol = 1e-12;
        const double want =
            integrate(f, 0.0, r, {std::abs(R_p - r_I), R_p + r_I}, tight);
        CHECK(disk_convolution(r, R_p, r_I) ==
              Catch::Approx(want).margin(1e-10 * (1 + want)));
    }
    // nondecreasing in r
    double prev = -1;
    for (int i = 0; i <= 50; ++i) {
        const double v = disk_convolution(0.1 * i, 1.2, 0.8);
        CHECK(v >= prev - 1e-14);
        prev = v;
    }
}

TEST_CASE("clear_zone_mass degenerate cases") {
    // zone vanishes: r_I + R_p <= R_I - d
    CHECK(clear_zone_mass(50, 1, 200, 252) == 0.0);
    // disk of influence clear of B entirely: r_I + R_p <= d - R_I
    CHECK(clear_zone_mass(500, 10, 200, 250) ==
          Catch::Approx(kPi * 100).epsilon(1e-14));
}

TEST_CASE("clear_zone_mass reference values") {
    // frozen from an independent 2-D quadrature of the defining double
    // integral (reference-figure parameters)
    CHECK(clear_zone_mass(50, 250, 200, 250) ==
          Catch::Approx(68429.032283055058).epsilon(1e-9));
    CHECK(clear_zone_mass(225, 250, 200, 250) ==
          Catch::Approx(116159.14925593248).epsilon(1e-9));
}

TEST_CASE("sensing_zone_mass endpoints and saturation") {
    CHECK(sensing_zone_mass(225, 0.0, 250, 200, 250) == 0.0);
    const double q = clear_zone_mass(120, 400, 200, 250);
    CHECK(sensing_zone_mass(120, 400 + 200, 400, 200, 250) ==
          Catch::Approx(q).epsilon(1e-9));
    CHECK(sensing_zone_mass(120, 1e9, 400, 200, 250) ==
          Catch::Approx(q).epsilon(1e-9));
    // frozen reference value
    CHECK(sensing_zone_mass(225, 150, 250, 200, 250) ==
          Catch::Approx(27734.152364783986).epsilon(1e-9));
}

TEST_CASE("zone masses match the 2-D polar oracle on random tuples") {
    CounterRng rng(13, 2);
    for (int i = 0; i < 8; ++i) {
        const double R_I = rng.uniform(0.5, 3.0);
        const double R_p = rng.uniform(0.2, 1.0) * R_I;
        const double r_I = rng.uniform(0.1, 4.0) * R_I;
        const double d = rng.uniform(0.0, 2.0) * r_I;
        const double q = clear_zone_mass(d, r_I, R_p, R_I);
        const double oracle = validation_detail::zone_mass_2d_oracle(
            d, r_I + R_p, r_I, R_p, R_I);
        CHECK(q == Catch::Approx(oracle).margin(1e-6 * (1 + oracle)));

        const double rho = rng.uniform(0.0, 1.2) * (r_I + R_p);
        const double w = sensing_zone_mass(d, rho, r_I, R_p, R_I);
        const double w_oracle = validation_detail::zone_mass_2d_oracle(
            d, std::min(rho, r_I + R_p), r_I, R_p, R_I);
        CHECK(w == Catch::Approx(w_oracle).margin(1e-6 * (1 + w_oracle)));
    }
}

TEST_CASE("geometry domain errors") {
    CHECK_THROWS_AS(lens_area(-1, 1, 1), DomainError);
    CHECK_THROWS_AS(disk_convolution(1, 0, 1), DomainError);
    CHECK_THROWS_AS(clear_zone_mass(1, 1, 1, 0), DomainError);
    CHECK_THROWS_AS(sensing_zone_mass(1, -1, 1, 1, 1), DomainError);
}

TEST_CASE("quadrature reports non-convergence with a residual") {
    QuadratureConfig strict;
    strict.rel_tol = 1e-15;
    strict.abs_tol = 1e-300;
    strict.max_depth = 1;  // refinement budget far too small
    const auto jitter = [](double r) { return std::sin(1e7 * r) + 2.0; };
    try {
        (void)integrate(jitter, 0.0, 3.0, {}, strict);
        FAIL("expected ConvergenceError");
    } catch (const ConvergenceError& e) {
        CHECK(e.residual() > 0.0);
    }
    // a resolvable oscillation converges with a realistic budget
    const auto wave = [](double r) { return std::sin(1e3 * r) + 2.0; };
    CHECK(integrate(wave, 0.0, 3.0, {}, QuadratureConfig{1e-9, 1e-12, 40}) ==
          Catch::Approx(6.0 + (1 - std::cos(3e3)) * 1e-3).epsilon(1e-8));
}

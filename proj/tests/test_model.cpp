#include <catch2/catch_amalgamated.hpp>

#include "crpower/model.hpp"
#include "crpower/rng.hpp"

using namespace crpower;

TEST_CASE("power_to_radius reference values") {
    // Fig-10 style parameters: tau = P_tx * R_I^-alpha with R_I = 250
    const double tau = 10.0 * std::pow(250.0, -3.0);
    CHECK(power_to_radius(10.0, tau, 3.0) == Catch::Approx(250.0).epsilon(1e-12));
    CHECK(power_to_radius(2.5, 2.5, 7.0) == Catch::Approx(1.0).epsilon(1e-12));
    CHECK(power_to_radius(8 * 2.5, 2.5, 3.0) == Catch::Approx(2.0).epsilon(1e-12));
    CHECK(radius_to_power(1.0, 0.37, 3.3) == Catch::Approx(0.37).epsilon(1e-12));
    CHECK(radius_to_power(250.0, tau, 3.0) == Catch::Approx(10.0).epsilon(1e-12));
    CHECK(radius_to_power(2.0, 2.5, 3.0) == Catch::Approx(8 * 2.5).epsilon(1e-12));
}

TEST_CASE("power/radius round trip and monotonicity") {
    CounterRng rng(7, 0);
    double prev_r = 0.0;
    for (int i = 0; i < 200; ++i) {
        const double p_tx = std::exp(rng.uniform(-8, 8));
        const double tau = std::exp(rng.uniform(-8, 2));
        const double alpha = rng.uniform(2.1, 6.0);
        const double r = power_to_radius(p_tx, tau, alpha);
        CHECK(radius_to_power(r, tau, alpha) ==
              Catch::Approx(p_tx).epsilon(1e-12));
    }
    // strictly increasing in p_tx at fixed tau, alpha
    for (int i = 1; i <= 50; ++i) {
        const double r = power_to_radius(0.1 * i, 0.05, 3.0);
        CHECK(r > prev_r);
        prev_r = r;
    }
}

TEST_CASE("domain errors on non-positive inputs") {
    CHECK_THROWS_AS(power_to_radius(0.0, 1.0, 3.0), DomainError);
    CHECK_THROWS_AS(power_to_radius(1.0, -1.0, 3.0), DomainError);
    CHECK_THROWS_AS(radius_to_power(0.0, 1.0, 3.0), DomainError);
}

TEST_CASE("parameter validation is eager") {
    CHECK_THROWS_AS(PrimaryNetwork(0.0, 0.5, 1, 2), DomainError);
    CHECK_THROWS_AS(PrimaryNetwork(1.0, 1.5, 1, 2), DomainError);
    CHECK_THROWS_AS(PrimaryNetwork(1.0, 0.5, 3, 2), DomainError);  // R_p > R_I
    CHECK_THROWS_AS(SecondaryLink(-1, 1, 0), DomainError);
    CHECK_THROWS_AS(SecondaryLink(0, 0, 0), DomainError);
    CHECK_THROWS_AS(InterferenceConstraint(1.0), DomainError);
    CHECK_THROWS_AS(InterferenceConstraint(0.0), DomainError);
    CHECK_THROWS_AS(PowerModel(2.0, 1, 1, 1), DomainError);  // alpha must be > 2
    CHECK_NOTHROW(PrimaryNetwork(0.00025, 0.0, 200, 250));   // p = 0 is legal
}

TEST_CASE("r_E is recomputed from the current r_D") {
    const PrimaryNetwork net{0.00025, 0.1, 200, 250};
    SecondaryLink link{180, 200, 150};
    CHECK(link.r_E(net) == 250.0);
    CHECK(link.with_r_D(400).r_E(net) == 400.0);
}

TEST_CASE("scheme and mode names round-trip") {
    for (auto s : {Scheme::LBT, Scheme::ELBT, Scheme::GENIE})
        CHECK(scheme_from_string(to_string(s)) == s);
    for (auto m : {DeliveryMode::GUARANTEED, DeliveryMode::BEST_EFFORT})
        CHECK(mode_from_string(to_string(m)) == m);
    CHECK_THROWS_AS(scheme_from_string("csma"), DomainError);
}

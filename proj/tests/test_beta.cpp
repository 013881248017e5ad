#include "doctest.h"
#include "helpers.hpp"
#include "mcpipe/beta_dist.hpp"
#include "mcpipe/quadrature.hpp"

using namespace mcpipe;

TEST_SUITE("beta") {

TEST_CASE("normalization constant") {
    CHECK(beta_norm(1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(beta_norm(1.0, 2.0) == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(beta_norm(3.0, 3.0) == doctest::Approx(1.0 / 30.0).epsilon(1e-12));
    CHECK(beta_norm(1.0, 7.5) == doctest::Approx(1.0 / 7.5).epsilon(1e-12));
    CHECK_THROWS_AS(beta_norm(0.0, 1.0), ConfigError);
}

TEST_CASE("density special cases") {
    const BetaInit uniform{1.0, 1.0};
    for (int i = 0; i <= 10; ++i)
        CHECK(beta_pdf(uniform, i / 10.0) == doctest::Approx(1.0).epsilon(1e-13));

    const BetaInit profile{1.0, 2.0};
    CHECK(beta_pdf(profile, 0.25) == doctest::Approx(1.5).epsilon(1e-13));

    const BetaInit bump{3.0, 3.0};
    CHECK(beta_pdf(bump, 0.5) == doctest::Approx(1.875).epsilon(1e-13));

    CHECK(beta_pdf(bump, -0.1) == 0.0);
    CHECK(beta_pdf(bump, 1.1) == 0.0);
}

TEST_CASE("density integrates to one") {
    for (const BetaInit init : {BetaInit{1.0, 1.0}, BetaInit{1.0, 2.0}, BetaInit{3.0, 3.0},
                                BetaInit{3.41, 3.28}}) {
        const double mass =
            adaptive_simpson([&](double s) { return beta_pdf(init, s); }, 0.0, 1.0);
        CHECK(mass == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("radial density") {
    const double a = 0.75e-3;
    const BetaInit uniform{1.0, 1.0};
    for (int i = 1; i < 10; ++i) {
        const double rho = a * i / 10.0;
        CHECK(radial_pdf(uniform, a, rho) == doctest::Approx(2.0 * rho / (a * a)).epsilon(1e-12));
    }

    const BetaInit profile{1.0, 2.0};
    CHECK(radial_pdf(profile, a, a) == 0.0);

    for (const BetaInit init : {BetaInit{1.0, 1.0}, BetaInit{3.0, 3.0}, BetaInit{2.5, 4.0}}) {
        const double mass =
            adaptive_simpson([&](double rho) { return radial_pdf(init, a, rho); }, 0.0, a);
        CHECK(mass == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("regularized incomplete beta closed forms") {
    for (int i = 0; i <= 1000; ++i) {
        const double x = i / 1000.0;
        CHECK(std::abs(reg_inc_beta(1.0, 1.0, x) - x) < 1e-10);
        CHECK(std::abs(reg_inc_beta(1.0, 2.0, x) - (2.0 * x - x * x)) < 1e-10);
    }
    CHECK(std::abs(reg_inc_beta(3.0, 3.0, 0.5) - 0.5) < 1e-12);
}

TEST_CASE("cdf endpoints, clamping, monotonicity") {
    const BetaInit init{3.0, 3.0};
    CHECK(beta_cdf(init, 0.0) == 0.0);
    CHECK(beta_cdf(init, 1.0) == 1.0);
    CHECK(beta_cdf(init, -5.0) == 0.0);
    CHECK(beta_cdf(init, 5.0) == 1.0);

    for (std::uint64_t i = 0; i < 200; ++i) {
        const BetaInit r{helpers::uniform(3, 1, i, 1.0, 10.0), helpers::uniform(3, 2, i, 1.0, 10.0)};
        const double x = helpers::uniform(3, 3, i, 0.0, 1.0);
        const double y = helpers::uniform(3, 4, i, 0.0, 1.0);
        const double lo = std::min(x, y), hi = std::max(x, y);
        CHECK(beta_cdf(r, lo) <= beta_cdf(r, hi) + 1e-15);
    }
}

TEST_CASE("cdf against quadrature of the density") {
    for (std::uint64_t i = 0; i < 40; ++i) {
        const BetaInit init{helpers::uniform(4, 1, i, 1.0, 8.0),
                            helpers::uniform(4, 2, i, 1.0, 8.0)};
        const double x = helpers::uniform(4, 3, i, 0.02, 0.98);
        const double by_quad =
            adaptive_simpson([&](double s) { return beta_pdf(init, s); }, 0.0, x);
        CHECK(beta_cdf(init, x) == doctest::Approx(by_quad).epsilon(1e-9));
    }
}

TEST_CASE("parameter validation") {
    const BetaInit low_alpha{0.5, 2.0};
    const BetaInit zero_beta{2.0, 0.0};
    const BetaInit boundary{1.0, 1.0};
    CHECK_THROWS_AS(low_alpha.validate(), ConfigError);
    CHECK_THROWS_AS(zero_beta.validate(), ConfigError);
    CHECK_NOTHROW(boundary.validate());
}

}  // TEST_SUITE

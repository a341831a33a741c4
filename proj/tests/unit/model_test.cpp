#include "exlq/model.hpp"

#include "test_oracles.hpp"

#include "doctest.h"

#include <cmath>
#include <limits>

using namespace exlq;

TEST_CASE("drift evaluates A x + F u") {
    const ModelParams m = oracles::table_model();
    CHECK(drift(0.0, 0.0, m) == 0.0);
    CHECK(drift(1.0, 1.0, m) == doctest::Approx(0.6).epsilon(1e-14));
    CHECK(drift(2.0, -1.0, m) == doctest::Approx(-1.2).epsilon(1e-14));
}

TEST_CASE("diffusion evaluates C x + D u") {
    const ModelParams m = oracles::table_model();
    CHECK(diffusion(0.0, 0.0, m) == 0.0);
    CHECK(diffusion(1.0, 1.0, m) == doctest::Approx(1.7).epsilon(1e-14));
    CHECK(diffusion(-2.0, 1.0, m) == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("reward evaluates the quadratic penalty") {
    const ModelParams m = oracles::table_model();
    CHECK(reward(0.0, 0.0, m) == 0.0);
    ModelParams state_only(-0.2, 0.8, 0.5, 1.2, 10.0, 0.0, 2.0, 0.5, 0.0);
    CHECK(reward(1.0, 0.0, state_only) == doctest::Approx(-5.5).epsilon(1e-14));
    CHECK(reward(1.0, 1.0, m) == doctest::Approx(-7.0).epsilon(1e-14));
}

TEST_CASE("non-finite inputs are rejected") {
    const ModelParams m = oracles::table_model();
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const double inf = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(drift(nan, 0.0, m), NonFiniteInput);
    CHECK_THROWS_AS(diffusion(0.0, inf, m), NonFiniteInput);
    CHECK_THROWS_AS(reward(inf, 0.0, m), NonFiniteInput);
    const AmbiguityBounds b(0.25, 1.0);
    CHECK_THROWS_AS(g_tilde(nan, b), NonFiniteInput);
}

TEST_CASE("g_tilde uses the matching interval endpoint") {
    const AmbiguityBounds b(0.25, 1.0);
    CHECK(g_tilde(0.0, b) == 0.0);
    CHECK(g_tilde(2.0, b) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(g_tilde(-2.0, b) == doctest::Approx(-1.0).epsilon(1e-15));
}

TEST_CASE("g_tilde is positively homogeneous and monotone") {
    const AmbiguityBounds b(0.3, 2.5);
    const double curvatures[] = {-7.0, -1.0, -1e-3, 0.0, 1e-3, 0.5, 4.0};
    const double scales[] = {0.0, 0.25, 1.0, 13.0};
    for (double c : curvatures) {
        for (double a : scales) {
            CHECK(g_tilde(a * c, b) == doctest::Approx(a * g_tilde(c, b)).epsilon(1e-12));
        }
    }
    for (std::size_t i = 1; i < std::size(curvatures); ++i) {
        CHECK(g_tilde(curvatures[i - 1], b) <= g_tilde(curvatures[i], b));
    }
}

TEST_CASE("degenerate interval reduces g_tilde to the classical coefficient") {
    const AmbiguityBounds b(0.49, 0.49);
    for (double c : {-3.0, -0.2, 0.0, 0.7, 11.0}) {
        CHECK(g_tilde(c, b) == doctest::Approx(0.5 * 0.49 * c).epsilon(1e-15));
    }
}

TEST_CASE("reward is nonpositive when the linear and cross terms vanish") {
    const ModelParams m(0.1, 0.2, 0.3, 0.4, 2.0, 0.0, 1.5, 0.0, 0.0);
    for (int i = -5; i <= 5; ++i) {
        for (int j = -5; j <= 5; ++j) {
            CHECK(reward(0.7 * i, 0.9 * j, m) <= 0.0);
        }
    }
}

TEST_CASE("constructors validate their invariants") {
    CHECK_THROWS_AS(ModelParams(0, 0, 0, 0, -1.0, 0, 1.0, 0, 0), InvalidParameter);
    CHECK_THROWS_AS(ModelParams(0, 0, 0, 0, 1.0, 0, 0.0, 0, 0), InvalidParameter);
    CHECK_THROWS_AS(ModelParams(0, 0, 0, 0, 1.0, 0, -2.0, 0, 0), InvalidParameter);
    CHECK_THROWS_AS(ModelParams(std::nan(""), 0, 0, 0, 1.0, 0, 1.0, 0, 0), NonFiniteInput);

    CHECK_THROWS_AS(AmbiguityBounds(0.0, 1.0), InvalidParameter);
    CHECK_THROWS_AS(AmbiguityBounds(-0.5, 1.0), InvalidParameter);
    CHECK_THROWS_AS(AmbiguityBounds(2.0, 1.0), InvalidParameter);
    CHECK_THROWS_AS(AmbiguityBounds(1.0, std::numeric_limits<double>::infinity()),
                    NonFiniteInput);
    CHECK(AmbiguityBounds(1.0, 1.0).degenerate());

    CHECK_THROWS_AS(AgentParams(0.0, 0.3), InvalidParameter);
    CHECK_THROWS_AS(AgentParams(0.6, 0.0), InvalidParameter);
    CHECK_THROWS_AS(AgentParams(-0.6, 0.3), InvalidParameter);
}

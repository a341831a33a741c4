#include "exlq/stability.hpp"

#include "test_oracles.hpp"

#include "doctest.h"

#include <cmath>
#include <numbers>
#include <vector>

using namespace exlq;

namespace {

const ModelParams kModel = oracles::table_model();
const AmbiguityBounds kBounds(0.01, 1.0);
const AgentParams kAgent(0.6, 0.3);

} // namespace

TEST_CASE("exploratory and classical growth exponents are identical") {
    const HjbCoefficients c = solve_hjb(kModel, kBounds, kAgent);
    const StabilityCoefficients expl = stability_coefficients(c, kModel, kBounds, kAgent.lambda, true);
    const StabilityCoefficients cls = stability_coefficients(c, kModel, kBounds, kAgent.lambda, false);
    CHECK(expl.alpha == cls.alpha); // bitwise
    CHECK(expl.c1 > 0.0);
    CHECK(cls.c1 == 0.0);
    CHECK(expl.beta > cls.beta);
}

TEST_CASE("uncontrolled system collapses the coefficients") {
    const ModelParams m(-0.4, 0.0, 0.7, 0.0, 10.0, 0.0, 2.0, 0.0, 0.0);
    const HjbCoefficients c = solve_hjb(m, kBounds, kAgent);
    const StabilityCoefficients sc = stability_coefficients(c, m, kBounds, kAgent.lambda, true);
    CHECK(sc.a1 == doctest::Approx(m.A).epsilon(1e-15));
    CHECK(sc.b1 == doctest::Approx(m.C).epsilon(1e-15));
    CHECK(sc.a2 == 0.0);
    CHECK(sc.b2 == 0.0);
    CHECK(sc.alpha ==
          doctest::Approx(2.0 * m.A + kBounds.sigma_upper_sq * m.C * m.C).epsilon(1e-15));
}

TEST_CASE("table parameters are admissible at rho = 0.3") {
    const HjbCoefficients c = solve_hjb(kModel, kBounds, kAgent);
    const StabilityCoefficients sc = stability_coefficients(c, kModel, kBounds, kAgent.lambda, true);
    CHECK(sc.alpha < 0.3);
    CHECK(sc.alpha < 0.0);
    const Admissibility adm = check_admissibility(kAgent.rho, sc);
    CHECK(adm.admissible);
    CHECK(adm.margin == doctest::Approx(kAgent.rho - sc.alpha).epsilon(1e-15));
}

TEST_CASE("check_admissibility is strict") {
    StabilityCoefficients sc{};
    sc.alpha = 0.5;
    CHECK(check_admissibility(1.5, sc).admissible);
    CHECK(check_admissibility(1.5, sc).margin == doctest::Approx(1.0));
    CHECK_FALSE(check_admissibility(0.5, sc).admissible);
    CHECK_FALSE(check_admissibility(0.2, sc).admissible);
}

TEST_CASE("dominating_bound closed form") {
    StabilityCoefficients sc{};
    sc.alpha = 0.4;
    sc.beta = 0.9;
    CHECK(dominating_bound(0.0, 3.0, sc) == doctest::Approx(9.0).epsilon(1e-15));
    SUBCASE("homogeneous bound grows exponentially") {
        sc.beta = 0.0;
        CHECK(dominating_bound(2.0, 3.0, sc) ==
              doctest::Approx(9.0 * std::exp(0.8)).epsilon(1e-14));
    }
    SUBCASE("positive exponent and forcing give a monotone bound") {
        double prev = dominating_bound(0.0, 1.0, sc);
        for (double t : {0.5, 1.0, 2.0, 4.0}) {
            const double cur = dominating_bound(t, 1.0, sc);
            CHECK(cur > prev);
            prev = cur;
        }
    }
    SUBCASE("degenerate exponent throws") {
        sc.alpha = 0.0;
        CHECK_THROWS_AS(dominating_bound(1.0, 1.0, sc), InvalidParameter);
    }
}

TEST_CASE("discounted dominating bound vanishes under admissibility") {
    const HjbCoefficients c = solve_hjb(kModel, kBounds, kAgent);
    const StabilityCoefficients sc = stability_coefficients(c, kModel, kBounds, kAgent.lambda, true);
    REQUIRE(check_admissibility(kAgent.rho, sc).admissible);
    double prev = std::numeric_limits<double>::infinity();
    for (double t : {10.0, 50.0, 100.0}) {
        const double discounted = std::exp(-kAgent.rho * t) * dominating_bound(t, 1.0, sc);
        CHECK(discounted < prev);
        prev = discounted;
    }
}

TEST_CASE("exploration cost is lambda over two rho") {
    CHECK(exploration_cost(AgentParams(0.6, 0.3)) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(exploration_cost(AgentParams(1e-300, 0.5)) == doctest::Approx(0.0).epsilon(1e-250));
    CHECK(exploration_cost(AgentParams(2.0, 0.25)) == doctest::Approx(4.0).epsilon(1e-15));
}

TEST_CASE("value_gap equals the cross-module value difference") {
    const HjbCoefficients c = solve_hjb(kModel, kBounds, kAgent);
    const double gap = value_gap(c, kModel, kBounds, kAgent);
    for (double x : {-5.0, 0.0, 7.0}) {
        const double diff = exploratory_value(x, c) -
                            non_exploratory_value(x, c, kModel, kBounds, kAgent);
        CHECK(gap == doctest::Approx(diff).epsilon(1e-12));
    }
}

TEST_CASE("value_gap with a unit log argument is -lambda/(2 rho)") {
    const HjbCoefficients c = solve_hjb(kModel, kBounds, kAgent);
    const double margin = kModel.K - c.k2 * kModel.D * kModel.D * kBounds.sigma_upper_sq;
    const double lambda = margin / (2.0 * std::numbers::pi * std::numbers::e);
    const AgentParams agent(lambda, 0.3);
    CHECK(value_gap(c, kModel, kBounds, agent) ==
          doctest::Approx(-lambda / 0.6).epsilon(1e-12));
}

TEST_CASE("value_gap vanishes with the exploration weight") {
    const HjbCoefficients c = solve_hjb(kModel, kBounds, kAgent);
    CHECK(std::abs(value_gap(c, kModel, kBounds, AgentParams(1e-12, 0.3))) < 1e-9);
}

TEST_CASE("assembled exploration cost reproduces lambda/(2 rho)") {
    // cost = (V_ne - V) - lambda * discounted integral of theta ln theta,
    // with the integral equal to -entropy/rho for the state-independent
    // policy variance.
    for (double sigma_bar : {0.1, 0.5, 1.0}) {
        for (double lambda : {0.1, 0.6, 2.0}) {
            for (double rho : {0.1, 0.3, 1.5}) {
                const AmbiguityBounds b(std::min(0.01, sigma_bar * sigma_bar),
                                        sigma_bar * sigma_bar);
                const AgentParams agent(lambda, rho);
                const HjbCoefficients c = solve_hjb(kModel, b, agent);
                const double x = 1.7;
                const GaussianPolicy pol = optimal_policy(x, c, kModel, b, lambda);
                const double entropy = oracles::gaussian_entropy(pol.variance);
                const double assembled =
                    (non_exploratory_value(x, c, kModel, b, agent) - exploratory_value(x, c)) -
                    lambda * (-entropy / rho);
                CHECK(assembled == doctest::Approx(lambda / (2.0 * rho)).epsilon(1e-12));
                CHECK(assembled ==
                      doctest::Approx(exploration_cost(agent)).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("convergence_sweep tracks variance and gap decay") {
    const std::vector<double> grid{0.01, 0.005, 0.001};
    const auto rows = convergence_sweep(grid, kModel, kBounds, 0.3, 1.0);
    REQUIRE(rows.size() == 3);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].lambda == grid[i]);
        if (i > 0) {
            CHECK(rows[i].policy_variance < rows[i - 1].policy_variance);
            CHECK(rows[i].abs_value_gap < rows[i - 1].abs_value_gap);
        }
    }
    const double ratio0 = rows[0].policy_variance / rows[0].lambda;
    for (const auto& row : rows) {
        CHECK(row.policy_variance / row.lambda == doctest::Approx(ratio0).epsilon(1e-12));
    }
}

TEST_CASE("convergence_sweep rejects bad grids") {
    CHECK_THROWS_AS(convergence_sweep(std::vector<double>{0.01, 0.02}, kModel, kBounds, 0.3, 1.0),
                    InvalidParameter);
    CHECK_THROWS_AS(convergence_sweep(std::vector<double>{0.01, 0.01}, kModel, kBounds, 0.3, 1.0),
                    InvalidParameter);
    CHECK_THROWS_AS(convergence_sweep(std::vector<double>{0.01, -0.1}, kModel, kBounds, 0.3, 1.0),
                    InvalidParameter);
    CHECK_THROWS_AS(convergence_sweep(std::vector<double>{}, kModel, kBounds, 0.3, 1.0),
                    InvalidParameter);
}

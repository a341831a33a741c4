#include "exlq/stability.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace exlq {

StabilityCoefficients stability_coefficients(const HjbCoefficients& c, const ModelParams& m,
                                             const AmbiguityBounds& b, double lambda,
                                             bool exploratory) {
    if (!(lambda >= 0.0)) {
        throw InvalidParameter("stability_coefficients: lambda must be >= 0");
    }
    const double s2 = b.sigma_upper_sq;
    const double margin = m.K - c.k2 * m.D * m.D * s2;
    if (!(margin > 0.0)) {
        throw InvalidParameter("stability_coefficients: requires K - k2 D^2 s2 > 0");
    }
    const double gain = (c.k2 * (m.F + m.C * m.D * s2) - m.I) / margin;
    const double offset = (c.k1 * m.F - m.Q) / margin;

    StabilityCoefficients sc{};
    sc.exploratory = exploratory;
    sc.a1 = m.A + m.F * gain;
    sc.a2 = m.F * offset;
    sc.b1 = m.C + m.D * gain;
    sc.b2 = m.D * offset;
    sc.c1 = exploratory ? lambda * m.D * m.D / margin : 0.0;

    const double cross = std::abs(2.0 * sc.a2 + 2.0 * s2 * sc.b1 * sc.b2) / 2.0;
    sc.alpha = 2.0 * sc.a1 + s2 * sc.b1 * sc.b1 + cross;
    sc.beta = cross + s2 * (sc.b2 * sc.b2 + sc.c1);
    return sc;
}

Admissibility check_admissibility(double rho, const StabilityCoefficients& sc) {
    return {rho > sc.alpha, rho - sc.alpha};
}

double dominating_bound(double t, double x0, const StabilityCoefficients& sc) {
    if (sc.alpha == 0.0) {
        throw InvalidParameter("dominating_bound: closed form degenerates at alpha = 0");
    }
    const double growth = std::exp(sc.alpha * t);
    return growth * x0 * x0 + sc.beta / sc.alpha * (growth - 1.0);
}

double exploration_cost(const AgentParams& agent) {
    return agent.lambda / (2.0 * agent.rho);
}

double value_gap(const HjbCoefficients& c, const ModelParams& m, const AmbiguityBounds& b,
                 const AgentParams& agent) {
    const double margin = m.K - c.k2 * m.D * m.D * b.sigma_upper_sq;
    if (!(margin > 0.0)) {
        throw InvalidParameter("value_gap: requires K - k2 D^2 s2 > 0");
    }
    return agent.lambda / (2.0 * agent.rho) *
           (std::log(2.0 * std::numbers::pi * std::numbers::e * agent.lambda / margin) - 1.0);
}

std::vector<ConvergenceRow> convergence_sweep(std::span<const double> lambda_grid,
                                              const ModelParams& m, const AmbiguityBounds& b,
                                              double rho, double x) {
    if (lambda_grid.empty()) {
        throw InvalidParameter("convergence_sweep: empty lambda grid");
    }
    for (std::size_t i = 0; i < lambda_grid.size(); ++i) {
        if (!(lambda_grid[i] > 0.0)) {
            throw InvalidParameter("convergence_sweep: grid point " + std::to_string(i) +
                                   " is not strictly positive");
        }
        if (i > 0 && !(lambda_grid[i] < lambda_grid[i - 1])) {
            throw InvalidParameter("convergence_sweep: grid not strictly descending at index " +
                                   std::to_string(i));
        }
    }

    // k2 and k1 do not depend on lambda; only k0 does.
    const double k2 = solve_k2(m, b, rho);
    const double k1 = compute_k1(k2, m, b, rho);

    std::vector<ConvergenceRow> rows;
    rows.reserve(lambda_grid.size());
    for (std::size_t i = 0; i < lambda_grid.size(); ++i) {
        const double lambda = lambda_grid[i];
        HjbCoefficients c{k2, k1, 0.0};
        try {
            c.k0 = compute_k0(k1, k2, m, b, rho, lambda);
            const AgentParams agent(lambda, rho);
            const GaussianPolicy pol = optimal_policy(x, c, m, b, lambda);
            const double gap = exploratory_value(x, c) - non_exploratory_value(x, c, m, b, agent);
            rows.push_back({lambda, pol.variance, std::abs(gap)});
        } catch (const Error& e) {
            throw InvalidParameter("convergence_sweep: grid point " + std::to_string(i) +
                                   " is ill-posed: " + e.what());
        }
    }
    return rows;
}

} // namespace exlq

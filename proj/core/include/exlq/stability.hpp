#pragma once

#include "exlq/lq.hpp"
#include "exlq/model.hpp"

#include <span>
#include <vector>

namespace exlq {

/// Closed-loop coefficients and the Gronwall growth data for the squared
/// state. The exploratory and classical processes share a1, a2, b1, b2 and
/// the growth exponent alpha; they differ only through the diffusion floor
/// c1 (zero for the classical process), which enters beta.
struct StabilityCoefficients {
    double a1;    ///< closed-loop drift slope
    double a2;    ///< closed-loop drift intercept
    double b1;    ///< closed-loop diffusion slope
    double b2;    ///< closed-loop diffusion intercept
    double c1;    ///< exploratory diffusion floor lambda D^2 / margin, 0 if classical
    double alpha; ///< growth exponent of the squared-state bound
    double beta;  ///< forcing constant of the squared-state bound
    bool exploratory;
};

StabilityCoefficients stability_coefficients(const HjbCoefficients& c, const ModelParams& m,
                                             const AmbiguityBounds& b, double lambda,
                                             bool exploratory);

struct Admissibility {
    bool admissible; ///< rho > alpha (strict)
    double margin;   ///< rho - alpha
};

Admissibility check_admissibility(double rho, const StabilityCoefficients& sc);

/// Dominating bound on the squared-state upper expectation at time t:
/// exp(alpha t) x0^2 + (beta/alpha)(exp(alpha t) - 1). Throws at alpha = 0
/// where the closed form degenerates.
double dominating_bound(double t, double x0, const StabilityCoefficients& sc);

/// Exploration cost lambda / (2 rho); depends on the agent only.
double exploration_cost(const AgentParams& agent);

/// x-independent value difference between the exploratory and classical
/// problems: (lambda / 2 rho)(ln(2 pi e lambda / (K - k2 D^2 s2)) - 1).
double value_gap(const HjbCoefficients& c, const ModelParams& m, const AmbiguityBounds& b,
                 const AgentParams& agent);

struct ConvergenceRow {
    double lambda;
    double policy_variance;
    double abs_value_gap;
};

/// Tracks policy variance and |value gap| along a strictly positive,
/// strictly descending lambda grid (vanishing-exploration diagnostics).
/// Throws InvalidParameter naming the offending index on a bad grid point.
std::vector<ConvergenceRow> convergence_sweep(std::span<const double> lambda_grid,
                                              const ModelParams& m, const AmbiguityBounds& b,
                                              double rho, double x);

} // namespace exlq

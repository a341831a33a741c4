#pragma once

#include "exlq/model.hpp"

#include <cstdint>
#include <vector>

namespace exlq {

/// One volatility path for the driving noise: a constant multiplier or a
/// piecewise-constant multiplier with jump times. Multipliers are on the
/// standard-deviation scale; feasibility against an ambiguity interval means
/// every multiplier squared lies within it.
class VolatilityScenario {
public:
    static VolatilityScenario constant(double sigma);

    /// sigmas.size() == breakpoints.size() + 1; sigmas[i] applies on
    /// [breakpoints[i-1], breakpoints[i]) with the obvious end pieces.
    static VolatilityScenario piecewise(std::vector<double> breakpoints,
                                        std::vector<double> sigmas);

    double sigma_at(double t) const;
    bool is_constant() const { return breakpoints_.empty(); }
    const std::vector<double>& sigmas() const { return sigmas_; }
    const std::vector<double>& breakpoints() const { return breakpoints_; }

    /// Throws SimulationError unless every multiplier squared lies in the
    /// ambiguity interval (up to a relative slack of 1e-12).
    void validate_against(const AmbiguityBounds& b) const;

private:
    VolatilityScenario(std::vector<double> breakpoints, std::vector<double> sigmas);

    std::vector<double> breakpoints_;
    std::vector<double> sigmas_;
};

/// Default scenario family: both constant extremes (the exact optimizers for
/// sign-definite functionals) plus n_random piecewise-constant paths whose
/// per-segment variances are drawn uniformly from the ambiguity interval.
/// Segment breakpoints partition [0, horizon] uniformly. Draws are keyed by
/// (seed, scenario index, segment), so the family is reproducible.
std::vector<VolatilityScenario> scenario_family(const AmbiguityBounds& b,
                                                std::size_t n_random,
                               std::size_t n_segments, double horizon, std::uint64_t seed);

} // namespace exlq

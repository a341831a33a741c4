#include "exlq/scenario.hpp"

#include "exlq/rng.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace exlq {

VolatilityScenario::VolatilityScenario(std::vector<double> breakpoints,
                                       std::vector<double> sigmas)
    : breakpoints_(std::move(breakpoints)), sigmas_(std::move(sigmas)) {}

VolatilityScenario VolatilityScenario::constant(double sigma) {
    if (!std::isfinite(sigma) || sigma <= 0.0) {
        throw InvalidParameter("VolatilityScenario: multiplier must be positive and finite");
    }
    return VolatilityScenario({}, {sigma});
}

VolatilityScenario VolatilityScenario::piecewise(std::vector<double> breakpoints,
                                                 std::vector<double> sigmas) {
    if (sigmas.size() != breakpoints.size() + 1) {
        throw InvalidParameter("VolatilityScenario: need one more multiplier than breakpoints");
    }
    for (std::size_t i = 0; i < breakpoints.size(); ++i) {
        if (!std::isfinite(breakpoints[i]) || breakpoints[i] < 0.0) {
            throw InvalidParameter("VolatilityScenario: breakpoints must be nonnegative");
        }
        if (i > 0 && !(breakpoints[i] > breakpoints[i - 1])) {
            throw InvalidParameter("VolatilityScenario: breakpoints must be strictly increasing");
        }
    }
    for (double s : sigmas) {
        if (!std::isfinite(s) || s <= 0.0) {
            throw InvalidParameter("VolatilityScenario: multipliers must be positive and finite");
        }
    }
    return VolatilityScenario(std::move(breakpoints), std::move(sigmas));
}

double VolatilityScenario::sigma_at(double t) const {
    const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t);
    return sigmas_[static_cast<std::size_t>(it - breakpoints_.begin())];
}

void VolatilityScenario::validate_against(const AmbiguityBounds& b) const {
    const double slack = 1e-12 * b.sigma_upper_sq;
    for (double s : sigmas_) {
        const double v = s * s;
        if (v < b.sigma_lower_sq - slack || v > b.sigma_upper_sq + slack) {
            throw SimulationError("scenario multiplier " + std::to_string(s) +
                                  " squared lies outside the ambiguity interval");
        }
    }
}

std::vector<VolatilityScenario> scenario_family(const AmbiguityBounds& b, std::size_t n_random,
                                                std::size_t n_segments, double horizon,
                                                std::uint64_t seed) {
    if (n_segments == 0 || !(horizon > 0.0)) {
        throw InvalidParameter("scenario_family: need n_segments >= 1 and horizon > 0");
    }
    std::vector<VolatilityScenario> family;
    family.reserve(2 + n_random);
    family.push_back(VolatilityScenario::constant(std::sqrt(b.sigma_lower_sq)));
    family.push_back(VolatilityScenario::constant(std::sqrt(b.sigma_upper_sq)));

    std::vector<double> breakpoints;
    breakpoints.reserve(n_segments - 1);
    for (std::size_t j = 1; j < n_segments; ++j) {
        breakpoints.push_back(horizon * static_cast<double>(j) / static_cast<double>(n_segments));
    }
    for (std::size_t r = 0; r < n_random; ++r) {
        std::vector<double> sigmas(n_segments);
        for (std::size_t j = 0; j < n_segments; ++j) {
            const double u = rng::uniform01(seed, rng::stream_id(rng::kScenarioKind, r + 2, 0), j);
            const double variance = b.sigma_lower_sq + u * (b.sigma_upper_sq - b.sigma_lower_sq);
            sigmas[j] = std::sqrt(variance);
        }
        family.push_back(VolatilityScenario::piecewise(breakpoints, std::move(sigmas)));
    }
    return family;
}

} // namespace exlq

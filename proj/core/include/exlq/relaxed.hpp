#pragma once

#include "exlq/model.hpp"
#include "exlq/quadrature.hpp"

#include <functional>
#include <optional>

namespace exlq {

struct Interval {
    double lo;
    double hi;

    double width() const { return hi - lo; }
    bool contains(double u) const { return u >= lo && u <= hi; }
};

/// Probability density over the action space, supported on a closed interval
/// and treated as zero outside it. Construction checks that the density
/// integrates to 1 within kNormalizationTol.
class PolicyDensity {
public:
    static constexpr double kNormalizationTol = 1e-6;

    PolicyDensity(std::function<double(double)> pdf, Interval support,
                  bool verify_normalization = true);

    /// Density value; zero outside the support.
    double operator()(double u) const;

    const Interval& support() const { return support_; }

    /// Normal(mean, variance) truncated at +/- truncation_sigmas standard
    /// deviations (mass beyond 8 sigma is below 1e-15, so the untruncated
    /// normal density still normalizes within tolerance).
    static PolicyDensity gaussian(double mean, double variance, double truncation_sigmas = 8.0);

    static PolicyDensity uniform(double lo, double hi);

    /// Normalizes a nonnegative weight function by adaptive quadrature.
    static PolicyDensity from_unnormalized(std::function<double(double)> weight,
                                           Interval support);

private:
    std::function<double(double)> pdf_;
    Interval support_;
};

/// First and second derivative evaluators of a candidate value function.
struct DifferentiableValue {
    std::function<double(double)> first;
    std::function<double(double)> second;
};

/// Density-averaged drift: integral of b(x,u) theta(u) du over the support.
double relaxed_drift(double x, const PolicyDensity& theta, const ModelParams& m);

/// Density-averaged volatility: sqrt of the second moment of sigma(x,.).
double relaxed_vol(double x, const PolicyDensity& theta, const ModelParams& m);

/// Density-averaged reward.
double relaxed_reward(double x, const PolicyDensity& theta, const ModelParams& m);

/// Differential entropy -integral theta ln theta, with 0 ln 0 = 0.
double differential_entropy(const PolicyDensity& theta);

/// Exponent of the randomized-control optimizer:
/// psi(x,u) = r(x,u) + sigma^2(x,u) g_tilde(v''(x)) + b(x,u) v'(x).
double policy_exponent(double x, double u, const DifferentiableValue& v,
                       const ModelParams& m, const AmbiguityBounds& b);

/// The exponential-of-exponent density, normalized by adaptive quadrature to
/// relative tolerance 1e-10. Without an explicit support, the exponent must
/// be a concave quadratic in u (checked by fit); the support is then taken
/// as mean +/- 8 standard deviations of the implied Gaussian. Throws
/// IllPosedPolicy when the normalizer diverges (in the linear-quadratic case
/// this signals K - 2 D^2 g_tilde(v'') <= 0).
PolicyDensity boltzmann_policy(double x, const DifferentiableValue& v, const ModelParams& m,
                               const AmbiguityBounds& b, double lambda,
                               std::optional<Interval> support = std::nullopt);

} // namespace exlq

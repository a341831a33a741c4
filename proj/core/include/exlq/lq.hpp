#pragma once

#include "exlq/model.hpp"
#include "exlq/relaxed.hpp"

#include <cstddef>
#include <vector>

namespace exlq {

/// Quadratic value-function coefficients v(x) = 1/2 k2 x^2 + k1 x + k0.
/// Admissible solutions have k2 < 0 and K - k2 D^2 sigma_upper_sq > 0.
struct HjbCoefficients {
    double k2;
    double k1;
    double k0;
};

/// Mean/variance of the optimal randomized feedback control at one state.
/// variance is lambda / (K - k2 D^2 sigma_upper_sq); it is 0 only in the
/// degenerate lambda = 0 limit (Dirac policy).
struct GaussianPolicy {
    double mean;
    double variance;
};

/// Residual of the scalar fixed-point equation for k2 in the concave regime
/// (worst-case variance bound active):
///   k2 = 2[(C D s2 + F) k2 - I]^2 / (rho (K - k2 D^2 s2))
///        + rho [(C^2 s2 + 2 A) k2 - M],           s2 = sigma_upper_sq.
/// Returns LHS - RHS. Throws DegenerateEquation at the pole K - k2 D^2 s2 = 0.
double k2_residual(double k2, const ModelParams& m, const AmbiguityBounds& b, double rho);

/// All admissible roots (k2 < 0 with positive well-posedness margin) of the
/// fixed-point equation, ordered by ascending magnitude. Found by a coarse
/// sign-change scan over [-k_max, 0) with k_max doubled from 1e3 up to 1e9,
/// a logarithmic near-zero scan, bisection to ~1e-14 relative bracket width,
/// and one Newton polish step.
std::vector<double> find_k2_roots(const ModelParams& m, const AmbiguityBounds& b, double rho);

/// Smallest-magnitude admissible root. Throws NoSolution when the scans find
/// no admissible sign change.
double solve_k2(const ModelParams& m, const AmbiguityBounds& b, double rho);

/// Root selected by index into the magnitude-ascending root list.
double solve_k2(const ModelParams& m, const AmbiguityBounds& b, double rho,
                std::size_t root_index);

/// Unique solution of the linear equation for k1 given k2. Throws
/// DegenerateEquation when the rearranged coefficient vanishes.
double compute_k1(double k2, const ModelParams& m, const AmbiguityBounds& b, double rho);

/// Closed form for the constant coefficient:
///   k0 = (k1 F - Q)^2 / (rho (K - k2 D^2 s2))
///        + (lambda / 2 rho) (ln(2 pi e lambda / (K - k2 D^2 s2)) - 1).
double compute_k0(double k1, double k2, const ModelParams& m, const AmbiguityBounds& b,
                  double rho, double lambda);

/// Solves the full coefficient set with the default root choice and verifies
/// k2 < 0 a posteriori.
HjbCoefficients solve_hjb(const ModelParams& m, const AmbiguityBounds& b,
                          const AgentParams& agent);

/// v(x) = 1/2 k2 x^2 + k1 x + k0.
double exploratory_value(double x, const HjbCoefficients& c);

/// Affine feedback map shared by the randomized policy mean and the
/// deterministic control: u(x) = slope * x + intercept, with the policy
/// variance alongside. Single source for the identity mean == control.
struct PolicyLine {
    double slope;
    double intercept;
    double variance;
};
PolicyLine policy_line(const HjbCoefficients& c, const ModelParams& m, const AmbiguityBounds& b,
                       double lambda);

/// Optimal randomized feedback control at state x. Requires lambda >= 0 and
/// the well-posedness margin K - k2 D^2 s2 > 0; lambda = 0 yields the
/// degenerate variance-0 policy.
GaussianPolicy optimal_policy(double x, const HjbCoefficients& c, const ModelParams& m,
                              const AmbiguityBounds& b, double lambda);

/// Gaussian policy induced by an arbitrary twice-differentiable value
/// candidate:
///   mean = (2 C D x g + F v'(x) - I x - Q) / (K - 2 D^2 g),
///   variance = lambda / (K - 2 D^2 g),       g = g_tilde(v''(x)).
/// Coincides with optimal_policy when v is the solved quadratic.
GaussianPolicy lq_policy_from_value(double x, const DifferentiableValue& v,
                                    const ModelParams& m, const AmbiguityBounds& b,
                                    double lambda);

/// Value of the classical (non-randomized) problem sharing k2 and k1;
/// differs from exploratory_value by an x-independent constant.
double non_exploratory_value(double x, const HjbCoefficients& c, const ModelParams& m,
                             const AmbiguityBounds& b, const AgentParams& agent);

/// Deterministic optimal feedback action; equals optimal_policy(x).mean.
double non_exploratory_control(double x, const HjbCoefficients& c, const ModelParams& m,
                               const AmbiguityBounds& b);

} // namespace exlq

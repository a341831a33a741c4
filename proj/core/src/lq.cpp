#include "exlq/lq.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace exlq {

namespace {

constexpr double kResidualTol = 1e-12;

double wellposed_margin(double k2, const ModelParams& m, const AmbiguityBounds& b) {
    return m.K - k2 * m.D * m.D * b.sigma_upper_sq;
}

bool admissible(double k2, const ModelParams& m, const AmbiguityBounds& b) {
    return k2 < 0.0 && wellposed_margin(k2, m, b) > 0.0;
}

/// Bisects a sign-change bracket [lo, hi] down to relative width ~1e-14,
/// then applies one Newton step with a central-difference derivative.
double refine_root(const ModelParams& m, const AmbiguityBounds& b, double rho,
                   double lo, double hi) {
    double flo = k2_residual(lo, m, b, rho);
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (hi - lo <= 1e-14 * std::max(1.0, std::abs(mid))) {
            break;
        }
        const double fmid = k2_residual(mid, m, b, rho);
        if ((flo <= 0.0) == (fmid <= 0.0)) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    double root = 0.5 * (lo + hi);
    const double h = 1e-7 * std::max(1.0, std::abs(root));
    const double dfdk = (k2_residual(root + h, m, b, rho) - k2_residual(root - h, m, b, rho)) /
                        (2.0 * h);
    if (std::isfinite(dfdk) && dfdk != 0.0) {
        const double polished = root - k2_residual(root, m, b, rho) / dfdk;
        if (polished > lo - (hi - lo) && polished < hi + (hi - lo) &&
            std::abs(k2_residual(polished, m, b, rho)) <=
                std::abs(k2_residual(root, m, b, rho))) {
            root = polished;
        }
    }
    return root;
}

void scan_for_roots(const ModelParams& m, const AmbiguityBounds& b, double rho,
                    double from, double to, std::size_t points,
                    std::vector<double>& roots) {
    // from < to <= 0; points evaluated inclusively at both ends.
    double prev_x = from;
    double prev_f = k2_residual(prev_x, m, b, rho);
    for (std::size_t i = 1; i <= points; ++i) {
        const double x = from + (to - from) * static_cast<double>(i) / static_cast<double>(points);
        const double f = k2_residual(x, m, b, rho);
        if ((prev_f <= 0.0) != (f <= 0.0)) {
            const double root = refine_root(m, b, rho, prev_x, x);
            if (admissible(root, m, b)) {
                roots.push_back(root);
            }
        }
        prev_x = x;
        prev_f = f;
    }
}

} // namespace

double k2_residual(double k2, const ModelParams& m, const AmbiguityBounds& b, double rho) {
    if (!std::isfinite(k2)) {
        throw NonFiniteInput("k2_residual: non-finite k2");
    }
    if (!(rho > 0.0)) {
        throw InvalidParameter("k2_residual: rho must be > 0");
    }
    const double s2 = b.sigma_upper_sq;
    const double margin = wellposed_margin(k2, m, b);
    if (margin == 0.0) {
        throw DegenerateEquation("k2_residual: pole K - k2 D^2 s2 = 0");
    }
    const double n = (m.C * m.D * s2 + m.F) * k2 - m.I;
    const double rhs = 2.0 * n * n / (rho * margin) + rho * ((m.C * m.C * s2 + 2.0 * m.A) * k2 - m.M);
    return k2 - rhs;
}

std::vector<double> find_k2_roots(const ModelParams& m, const AmbiguityBounds& b, double rho) {
    std::vector<double> roots;
    constexpr std::size_t kLinearPoints = std::size_t{1} << 20;
    constexpr std::size_t kLogPoints = 4096;

    // Logarithmic sweep close to zero catches roots smaller than the linear
    // scan resolution.
    {
        double prev_x = -1e-12;
        double prev_f = k2_residual(prev_x, m, b, rho);
        for (std::size_t i = 1; i <= kLogPoints; ++i) {
            const double mag =
                1e-12 * std::pow(1e12, static_cast<double>(i) / static_cast<double>(kLogPoints));
            const double x = -mag;
            const double f = k2_residual(x, m, b, rho);
            if ((prev_f <= 0.0) != (f <= 0.0)) {
                const double root = refine_root(m, b, rho, x, prev_x);
                if (admissible(root, m, b)) {
                    roots.push_back(root);
                }
            }
            prev_x = x;
            prev_f = f;
        }
    }

    double low = -1e3;
    scan_for_roots(m, b, rho, low, -1.0, kLinearPoints, roots);
    while (roots.empty() && low > -1e9) {
        const double next_low = std::max(low * 2.0, -1e9);
        scan_for_roots(m, b, rho, next_low, low, kLinearPoints, roots);
        low = next_low;
    }

    std::sort(roots.begin(), roots.end(),
              [](double a, double c) { return std::abs(a) < std::abs(c); });
    // Merge refinements of the same root found by overlapping scans.
    roots.erase(std::unique(roots.begin(), roots.end(),
                            [](double a, double c) {
                                return std::abs(a - c) <= 1e-9 * std::max(1.0, std::abs(a));
                            }),
                roots.end());
    return roots;
}

double solve_k2(const ModelParams& m, const AmbiguityBounds& b, double rho) {
    return solve_k2(m, b, rho, 0);
}

double solve_k2(const ModelParams& m, const AmbiguityBounds& b, double rho,
                std::size_t root_index) {
    const std::vector<double> roots = find_k2_roots(m, b, rho);
    if (roots.empty()) {
        throw NoSolution("solve_k2: no admissible sign change in [-1e9, 0)");
    }
    if (root_index >= roots.size()) {
        throw InvalidParameter("solve_k2: root index " + std::to_string(root_index) +
                               " out of range (found " + std::to_string(roots.size()) +
                               " admissible roots)");
    }
    const double root = roots[root_index];
    const double res = k2_residual(root, m, b, rho);
    if (std::abs(res) > kResidualTol * std::max(1.0, std::abs(root))) {
        throw NoSolution("solve_k2: refined root fails the residual tolerance, |res| = " +
                         std::to_string(std::abs(res)));
    }
    return root;
}

double compute_k1(double k2, const ModelParams& m, const AmbiguityBounds& b, double rho) {
    if (!(rho > 0.0)) {
        throw InvalidParameter("compute_k1: rho must be > 0");
    }
    const double s2 = b.sigma_upper_sq;
    const double margin = wellposed_margin(k2, m, b);
    if (margin == 0.0) {
        throw DegenerateEquation("compute_k1: pole K - k2 D^2 s2 = 0");
    }
    const double n = (m.C * m.D * s2 + m.F) * k2 - m.I;
    // k1 = 2 n (F k1 - Q) / (rho margin) + rho (A k1 - P), linear in k1.
    const double coef = 1.0 - 2.0 * n * m.F / (rho * margin) - rho * m.A;
    const double rhs = -2.0 * n * m.Q / (rho * margin) - rho * m.P;
    if (std::abs(coef) < 1e-14 * (1.0 + std::abs(rhs))) {
        throw DegenerateEquation("compute_k1: linear coefficient vanished after rearrangement");
    }
    return rhs / coef;
}

double compute_k0(double k1, double k2, const ModelParams& m, const AmbiguityBounds& b,
                  double rho, double lambda) {
    if (!(rho > 0.0)) {
        throw InvalidParameter("compute_k0: rho must be > 0");
    }
    if (!(lambda > 0.0)) {
        throw InvalidParameter("compute_k0: lambda must be > 0");
    }
    const double margin = wellposed_margin(k2, m, b);
    if (!(margin > 0.0)) {
        throw InvalidParameter("compute_k0: requires K - k2 D^2 s2 > 0");
    }
    const double forcing = k1 * m.F - m.Q;
    const double log_term = std::log(2.0 * std::numbers::pi * std::numbers::e * lambda / margin);
    return forcing * forcing / (rho * margin) + lambda / (2.0 * rho) * (log_term - 1.0);
}

HjbCoefficients solve_hjb(const ModelParams& m, const AmbiguityBounds& b,
                          const AgentParams& agent) {
    const double k2 = solve_k2(m, b, agent.rho);
    if (!(k2 < 0.0)) {
        throw NoSolution("solve_hjb: solved k2 is not negative; concave regime assumption fails");
    }
    const double k1 = compute_k1(k2, m, b, agent.rho);
    const double k0 = compute_k0(k1, k2, m, b, agent.rho, agent.lambda);
    return {k2, k1, k0};
}

double exploratory_value(double x, const HjbCoefficients& c) {
    return 0.5 * c.k2 * x * x + c.k1 * x + c.k0;
}

PolicyLine policy_line(const HjbCoefficients& c, const ModelParams& m, const AmbiguityBounds& b,
                       double lambda) {
    if (!(lambda >= 0.0)) {
        throw InvalidParameter("policy_line: lambda must be >= 0");
    }
    const double s2 = b.sigma_upper_sq;
    const double margin = wellposed_margin(c.k2, m, b);
    if (!(margin > 0.0)) {
        throw IllPosedPolicy("policy_line: well-posedness margin K - k2 D^2 s2 <= 0");
    }
    const double slope = (c.k2 * (m.F + m.C * m.D * s2) - m.I) / margin;
    const double intercept = (c.k1 * m.F - m.Q) / margin;
    return {slope, intercept, lambda / margin};
}

GaussianPolicy optimal_policy(double x, const HjbCoefficients& c, const ModelParams& m,
                              const AmbiguityBounds& b, double lambda) {
    const PolicyLine line = policy_line(c, m, b, lambda);
    return {line.slope * x + line.intercept, line.variance};
}

GaussianPolicy lq_policy_from_value(double x, const DifferentiableValue& v,
                                    const ModelParams& m, const AmbiguityBounds& b,
                                    double lambda) {
    if (!(lambda >= 0.0)) {
        throw InvalidParameter("lq_policy_from_value: lambda must be >= 0");
    }
    const double g = g_tilde(v.second(x), b);
    const double margin = m.K - 2.0 * m.D * m.D * g;
    if (!(margin > 0.0)) {
        throw IllPosedPolicy(
            "lq_policy_from_value: K - 2 D^2 g_tilde(v'') <= 0; the Gaussian policy "
            "is not well posed");
    }
    const double mean = (2.0 * m.C * m.D * x * g + m.F * v.first(x) - m.I * x - m.Q) / margin;
    return {mean, lambda / margin};
}

double non_exploratory_value(double x, const HjbCoefficients& c, const ModelParams& m,
                             const AmbiguityBounds& b, const AgentParams& agent) {
    const double margin = wellposed_margin(c.k2, m, b);
    if (!(margin > 0.0)) {
        throw InvalidParameter("non_exploratory_value: requires K - k2 D^2 s2 > 0");
    }
    const double gap = agent.lambda / (2.0 * agent.rho) *
                       (std::log(2.0 * std::numbers::pi * std::numbers::e * agent.lambda / margin) -
                        1.0);
    return exploratory_value(x, c) - gap;
}

double non_exploratory_control(double x, const HjbCoefficients& c, const ModelParams& m,
                               const AmbiguityBounds& b) {
    const PolicyLine line = policy_line(c, m, b, 0.0);
    return line.slope * x + line.intercept;
}

} // namespace exlq

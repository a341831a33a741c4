#pragma once

#include <cstddef>
#include <functional>

namespace exlq {

struct QuadratureOptions {
    double rel_tol = 1e-10;
    double abs_tol = 0.0;
    std::size_t max_subintervals = std::size_t{1} << 20;
};

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    std::size_t subintervals = 0;
};

/// Adaptive Gauss-Kronrod (7,15) integration of f over [lo, hi] by interval
/// bisection. Subdivides the worst-error interval until the summed error
/// estimate drops below max(rel_tol*|value|, abs_tol); accepted pieces are
/// summed left to right with compensated accumulation, so the result is
/// deterministic. Throws QuadratureError once max_subintervals is reached
/// with the tolerance still unmet, or when a non-finite value appears.
QuadratureResult integrate(const std::function<double(double)>& f, double lo, double hi,
                           const QuadratureOptions& opts = {});

/// Convenience wrapper returning just the value.
double integrate_value(const std::function<double(double)>& f, double lo, double hi,
                       const QuadratureOptions& opts = {});

} // namespace exlq

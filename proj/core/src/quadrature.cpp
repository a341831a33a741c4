#include "exlq/quadrature.hpp"

#include "exlq/errors.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

namespace exlq {

namespace {

// Kronrod-15 abscissae on [-1,1] (non-negative half) with Kronrod and
// embedded Gauss-7 weights. Zero Gauss weight marks Kronrod-only nodes.
struct Node {
    double x;
    double gauss_w;
    double kronrod_w;
};

constexpr Node kNodes[8] = {
    {0.000000000000000, 0.417959183673469, 0.209482141084728},
    {0.405845151377397, 0.381830050505119, 0.190350578064785},
    {0.741531185599394, 0.279705391489277, 0.140653259715525},
    {0.949107912342759, 0.129484966168870, 0.063092092629979},
    {0.207784955007898, 0.0, 0.204432940075298},
    {0.586087235467691, 0.0, 0.169004726639267},
    {0.864864423359769, 0.0, 0.104790010322250},
    {0.991455371120813, 0.0, 0.022935322010529},
};

struct Segment {
    double lo;
    double hi;
    double value;
    double error;
};

Segment evaluate(const std::function<double(double)>& f, double lo, double hi) {
    const double center = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);

    const double f0 = f(center);
    double gauss = kNodes[0].gauss_w * f0;
    double kronrod = kNodes[0].kronrod_w * f0;
    for (int i = 1; i < 8; ++i) {
        const double dx = half * kNodes[i].x;
        const double pair = f(center + dx) + f(center - dx);
        gauss += kNodes[i].gauss_w * pair;
        kronrod += kNodes[i].kronrod_w * pair;
    }
    gauss *= half;
    kronrod *= half;

    if (!std::isfinite(kronrod)) {
        throw QuadratureError("integrand produced a non-finite value");
    }

    double err = std::abs(kronrod - gauss);
    // QUADPACK-style sharpening of the raw Gauss/Kronrod difference.
    err = 200.0 * err;
    err = err * std::sqrt(err);
    return {lo, hi, kronrod, err};
}

} // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double lo, double hi,
                           const QuadratureOptions& opts) {
    if (!std::isfinite(lo) || !std::isfinite(hi)) {
        throw InvalidParameter("integrate: bounds must be finite");
    }
    if (lo == hi) {
        return {0.0, 0.0, 1};
    }
    const double sign = lo < hi ? 1.0 : -1.0;
    const double a = std::min(lo, hi);
    const double b = std::max(lo, hi);

    auto worse = [](const Segment& s, const Segment& t) { return s.error < t.error; };
    std::priority_queue<Segment, std::vector<Segment>, decltype(worse)> queue(worse);

    // Odd initial split so localized mass cannot sit exactly on every
    // bisection boundary of a symmetric interval and go unsampled.
    const std::size_t initial =
        std::min<std::size_t>(13, std::max<std::size_t>(1, opts.max_subintervals));
    double total_value = 0.0;
    double total_error = 0.0;
    for (std::size_t i = 0; i < initial; ++i) {
        const double lo_i = a + (b - a) * static_cast<double>(i) / static_cast<double>(initial);
        const double hi_i =
            i + 1 == initial
                ? b
                : a + (b - a) * static_cast<double>(i + 1) / static_cast<double>(initial);
        const Segment s = evaluate(f, lo_i, hi_i);
        total_value += s.value;
        total_error += s.error;
        queue.push(s);
    }
    std::size_t count = initial;

    auto tolerance = [&] { return std::max(opts.rel_tol * std::abs(total_value), opts.abs_tol); };

    while (total_error > tolerance()) {
        if (count >= opts.max_subintervals) {
            throw QuadratureError("quadrature did not converge within the subdivision budget");
        }
        Segment worst = queue.top();
        queue.pop();
        const double mid = 0.5 * (worst.lo + worst.hi);
        if (mid <= worst.lo || mid >= worst.hi) {
            // Interval is at machine resolution; accept its estimate as-is.
            total_error -= worst.error;
            worst.error = 0.0;
            queue.push(worst);
            if (total_error <= tolerance()) {
                break;
            }
            throw QuadratureError("quadrature stalled at machine-resolution intervals");
        }
        const Segment left = evaluate(f, worst.lo, mid);
        const Segment right = evaluate(f, mid, worst.hi);
        total_value += left.value + right.value - worst.value;
        total_error += left.error + right.error - worst.error;
        queue.push(left);
        queue.push(right);
        ++count;
    }

    // Deterministic final pass: order segments left to right, compensated sum.
    std::vector<Segment> segments;
    segments.reserve(queue.size());
    while (!queue.empty()) {
        segments.push_back(queue.top());
        queue.pop();
    }
    std::sort(segments.begin(), segments.end(),
              [](const Segment& s, const Segment& t) { return s.lo < t.lo; });
    double sum = 0.0;
    double comp = 0.0;
    double err = 0.0;
    for (const Segment& s : segments) {
        const double y = s.value - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        err += s.error;
    }
    return {sign * sum, err, count};
}

double integrate_value(const std::function<double(double)>& f, double lo, double hi,
                       const QuadratureOptions& opts) {
    return integrate(f, lo, hi, opts).value;
}

} // namespace exlq

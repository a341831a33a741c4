#include "exlq/relaxed.hpp"

#include <cmath>
#include <numbers>
#include <utility>

namespace exlq {

namespace {

constexpr QuadratureOptions kRelaxedQuad{1e-10, 0.0, std::size_t{1} << 20};

void check_support(const Interval& s) {
    if (!std::isfinite(s.lo) || !std::isfinite(s.hi) || !(s.lo < s.hi)) {
        throw InvalidParameter("PolicyDensity: support must be a finite interval with lo < hi");
    }
}

} // namespace

PolicyDensity::PolicyDensity(std::function<double(double)> pdf, Interval support,
                             bool verify_normalization)
    : pdf_(std::move(pdf)), support_(support) {
    check_support(support_);
    if (verify_normalization) {
        const double mass = integrate_value([this](double u) { return pdf_(u); },
                                            support_.lo, support_.hi, kRelaxedQuad);
        if (std::abs(mass - 1.0) > kNormalizationTol) {
            throw InvalidParameter("PolicyDensity: density mass " + std::to_string(mass) +
                                   " outside [1-1e-6, 1+1e-6]");
        }
    }
}

double PolicyDensity::operator()(double u) const {
    if (!support_.contains(u)) {
        return 0.0;
    }
    const double v = pdf_(u);
    if (!(v >= 0.0)) {
        throw InvalidParameter("PolicyDensity: negative or NaN density value");
    }
    return v;
}

PolicyDensity PolicyDensity::gaussian(double mean, double variance, double truncation_sigmas) {
    if (!(variance > 0.0)) {
        throw InvalidParameter("PolicyDensity::gaussian: variance must be > 0");
    }
    const double sd = std::sqrt(variance);
    const double norm = 1.0 / (sd * std::sqrt(2.0 * std::numbers::pi));
    auto pdf = [mean, variance, norm](double u) {
        const double d = u - mean;
        return norm * std::exp(-0.5 * d * d / variance);
    };
    return PolicyDensity(pdf, {mean - truncation_sigmas * sd, mean + truncation_sigmas * sd});
}

PolicyDensity PolicyDensity::uniform(double lo, double hi) {
    check_support({lo, hi});
    const double h = 1.0 / (hi - lo);
    return PolicyDensity([h](double) { return h; }, {lo, hi});
}

PolicyDensity PolicyDensity::from_unnormalized(std::function<double(double)> weight,
                                               Interval support) {
    check_support(support);
    const double mass = integrate_value(weight, support.lo, support.hi, kRelaxedQuad);
    if (!std::isfinite(mass) || mass <= 0.0) {
        throw IllPosedPolicy("from_unnormalized: weight mass is zero or non-finite");
    }
    auto pdf = [w = std::move(weight), mass](double u) { return w(u) / mass; };
    return PolicyDensity(std::move(pdf), support, false);
}

double relaxed_drift(double x, const PolicyDensity& theta, const ModelParams& m) {
    const Interval& s = theta.support();
    return integrate_value([&](double u) { return drift(x, u, m) * theta(u); },
                           s.lo, s.hi, kRelaxedQuad);
}

double relaxed_vol(double x, const PolicyDensity& theta, const ModelParams& m) {
    const Interval& s = theta.support();
    const double second_moment =
        integrate_value([&](double u) {
            const double sig = diffusion(x, u, m);
            return sig * sig * theta(u);
        }, s.lo, s.hi, kRelaxedQuad);
    return std::sqrt(std::max(second_moment, 0.0));
}

double relaxed_reward(double x, const PolicyDensity& theta, const ModelParams& m) {
    const Interval& s = theta.support();
    return integrate_value([&](double u) { return reward(x, u, m) * theta(u); },
                           s.lo, s.hi, kRelaxedQuad);
}

double differential_entropy(const PolicyDensity& theta) {
    const Interval& s = theta.support();
    return integrate_value([&](double u) {
        const double p = theta(u);
        return p > 0.0 ? -p * std::log(p) : 0.0;
    }, s.lo, s.hi, kRelaxedQuad);
}

double policy_exponent(double x, double u, const DifferentiableValue& v,
                       const ModelParams& m, const AmbiguityBounds& b) {
    const double sig = diffusion(x, u, m);
    return reward(x, u, m) + sig * sig * g_tilde(v.second(x), b) + drift(x, u, m) * v.first(x);
}

PolicyDensity boltzmann_policy(double x, const DifferentiableValue& v, const ModelParams& m,
                               const AmbiguityBounds& b, double lambda,
                               std::optional<Interval> support) {
    if (!(lambda > 0.0)) {
        throw InvalidParameter("boltzmann_policy: lambda must be > 0");
    }
    // captured by value so the returned density owns everything it needs
    auto psi = [x, v, m, b](double u) { return policy_exponent(x, u, v, m, b); };

    Interval box{};
    double shift = 0.0;
    if (support) {
        box = *support;
        check_support(box);
        // Shift by the largest exponent seen on a coarse grid so the
        // normalizer cannot overflow.
        shift = psi(box.lo);
        for (int i = 1; i <= 128; ++i) {
            const double u = box.lo + box.width() * static_cast<double>(i) / 128.0;
            shift = std::max(shift, psi(u));
        }
    } else {
        // Fit psi(u) = a u^2 + bu + c through three points; exact when psi is
        // quadratic in u, which the fit check at +/-2 confirms.
        const double p0 = psi(0.0);
        const double pp = psi(1.0);
        const double pm = psi(-1.0);
        const double a = 0.5 * (pp + pm) - p0;
        const double lin = 0.5 * (pp - pm);
        const double scale = 1.0 + std::abs(p0) + std::abs(pp) + std::abs(pm);
        for (double probe : {-2.0, 2.0}) {
            const double fitted = a * probe * probe + lin * probe + p0;
            if (std::abs(psi(probe) - fitted) > 1e-8 * (scale + std::abs(fitted))) {
                throw InvalidParameter(
                    "boltzmann_policy: exponent is not quadratic in the action; "
                    "pass an explicit support");
            }
        }
        if (!(a < 0.0)) {
            throw IllPosedPolicy(
                "boltzmann_policy: normalizing integral diverges (non-concave exponent; "
                "well-posedness of the control penalty fails)");
        }
        const double mean = -lin / (2.0 * a);
        const double sd = std::sqrt(lambda / (-2.0 * a));
        box = {mean - 8.0 * sd, mean + 8.0 * sd};
        shift = psi(mean);
    }

    auto weight = [psi, shift, lambda](double u) { return std::exp((psi(u) - shift) / lambda); };
    double mass = 0.0;
    try {
        mass = integrate_value(weight, box.lo, box.hi, kRelaxedQuad);
    } catch (const QuadratureError& e) {
        throw IllPosedPolicy(std::string("boltzmann_policy: normalizer quadrature failed: ") +
                             e.what());
    }
    if (!std::isfinite(mass) || mass <= 0.0) {
        throw IllPosedPolicy("boltzmann_policy: normalizing integral overflowed or vanished");
    }
    auto pdf = [weight, mass](double u) { return weight(u) / mass; };
    return PolicyDensity(std::move(pdf), box, false);
}

} // namespace exlq

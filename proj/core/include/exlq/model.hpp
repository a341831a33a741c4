#pragma once

#include "exlq/errors.hpp"

namespace exlq {

/// Constants of the scalar linear-quadratic model.
///
/// Dynamics:  drift b(x,u) = A x + F u,  diffusion sigma(x,u) = C x + D u.
/// Reward:    r(x,u) = -(M/2 x^2 + I x u + K/2 u^2 + P x + Q u).
///
/// The constructor validates M >= 0 and K > 0 and rejects non-finite values.
struct ModelParams {
    double A; // state drift slope
    double F; // control drift gain
    double C; // state diffusion slope
    double D; // control diffusion gain
    double M; // quadratic state penalty, M >= 0
    double I; // state-control cross penalty
    double K; // quadratic control penalty, K > 0
    double P; // linear state penalty
    double Q; // linear control penalty

    ModelParams(double A, double F, double C, double D,
                double M, double I, double K, double P, double Q);
};

/// Volatility-uncertainty interval [sigma_lower_sq, sigma_upper_sq].
/// Invariant: 0 < lower <= upper < inf.
struct AmbiguityBounds {
    double sigma_lower_sq;
    double sigma_upper_sq;

    AmbiguityBounds(double sigma_lower_sq, double sigma_upper_sq);

    bool degenerate() const { return sigma_lower_sq == sigma_upper_sq; }
};

/// Agent preferences: exploration weight and discount rate, both > 0.
struct AgentParams {
    double lambda; // exploration weight
    double rho;    // discount rate

    AgentParams(double lambda, double rho);
};

/// b(x,u) = A x + F u. Throws NonFiniteInput on NaN/inf arguments.
double drift(double x, double u, const ModelParams& m);

/// sigma(x,u) = C x + D u.
double diffusion(double x, double u, const ModelParams& m);

/// r(x,u) = -(M/2 x^2 + I x u + K/2 u^2 + P x + Q u).
double reward(double x, double u, const ModelParams& m);

/// Lower-expectation second-order coefficient:
/// g_tilde(c) = 1/2 sigma_lower_sq * c for c >= 0, 1/2 sigma_upper_sq * c otherwise.
/// Positively homogeneous and monotone in c; reduces to 1/2 sigma^2 c when the
/// interval is degenerate.
double g_tilde(double curvature, const AmbiguityBounds& b);

} // namespace exlq

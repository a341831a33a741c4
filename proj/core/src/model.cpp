#include "exlq/model.hpp"

#include <cmath>

namespace exlq {

namespace {

void require_finite(double v, const char* name) {
    if (!std::isfinite(v)) {
        throw NonFiniteInput(std::string("non-finite value for ") + name);
    }
}

} // namespace

ModelParams::ModelParams(double A_, double F_, double C_, double D_,
                         double M_, double I_, double K_, double P_, double Q_)
    : A(A_), F(F_), C(C_), D(D_), M(M_), I(I_), K(K_), P(P_), Q(Q_) {
    require_finite(A, "A");
    require_finite(F, "F");
    require_finite(C, "C");
    require_finite(D, "D");
    require_finite(M, "M");
    require_finite(I, "I");
    require_finite(K, "K");
    require_finite(P, "P");
    require_finite(Q, "Q");
    if (M < 0.0) {
        throw InvalidParameter("ModelParams: M must be >= 0");
    }
    if (K <= 0.0) {
        throw InvalidParameter("ModelParams: K must be > 0");
    }
}

AmbiguityBounds::AmbiguityBounds(double lower, double upper)
    : sigma_lower_sq(lower), sigma_upper_sq(upper) {
    require_finite(lower, "sigma_lower_sq");
    require_finite(upper, "sigma_upper_sq");
    if (!(lower > 0.0) || !(lower <= upper)) {
        throw InvalidParameter("AmbiguityBounds: require 0 < sigma_lower_sq <= sigma_upper_sq");
    }
}

AgentParams::AgentParams(double lambda_, double rho_) : lambda(lambda_), rho(rho_) {
    require_finite(lambda, "lambda");
    require_finite(rho, "rho");
    if (lambda <= 0.0) {
        throw InvalidParameter("AgentParams: lambda must be > 0");
    }
    if (rho <= 0.0) {
        throw InvalidParameter("AgentParams: rho must be > 0");
    }
}

double drift(double x, double u, const ModelParams& m) {
    require_finite(x, "x");
    require_finite(u, "u");
    return m.A * x + m.F * u;
}

double diffusion(double x, double u, const ModelParams& m) {
    require_finite(x, "x");
    require_finite(u, "u");
    return m.C * x + m.D * u;
}

double reward(double x, double u, const ModelParams& m) {
    require_finite(x, "x");
    require_finite(u, "u");
    return -(0.5 * m.M * x * x + m.I * x * u + 0.5 * m.K * u * u + m.P * x + m.Q * u);
}

double g_tilde(double curvature, const AmbiguityBounds& b) {
    require_finite(curvature, "curvature");
    return curvature >= 0.0 ? 0.5 * b.sigma_lower_sq * curvature
                            : 0.5 * b.sigma_upper_sq * curvature;
}

} // namespace exlq

#pragma once

#include "exlq/model.hpp"

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace exlq {

/// Unvalidated model constants as read from a config file. Kept raw so the
/// verification modes can flag invalid parameters per run instead of
/// failing at load time.
struct RawModel {
    double A = 0.0;
    double F = 0.0;
    double C = 0.0;
    double D = 0.0;
    double M = 0.0;
    double I = 0.0;
    double K = 0.0;
    double P = 0.0;
    double Q = 0.0;

    ModelParams validated() const { return {A, F, C, D, M, I, K, P, Q}; }
};

/// Parsed verification configuration.
///
/// File format: INI-style sections with `key = value` lines; `#` and `;`
/// start comments. Grids are comma- or whitespace-separated lists.
///
///   [model]      A F C D M I K P Q               (all required)
///   [ambiguity]  sigma_lower_sq, and exactly one of
///                sigma_upper_sq (variance) | sigma_upper_grid (sigma-bar values)
///   [agent]      exactly one of lambda | lambda_grid, and rho | rho_grid
///   [test]       x_test, epsilon, N              (optional, defaulted)
///
/// Unknown sections or keys are errors.
struct VerificationConfig {
    RawModel model;
    double sigma_lower_sq = 0.0;
    std::vector<double> sigma_upper_sq_grid; ///< variance scale, one entry per grid point
    bool sigma_is_grid = false;
    std::vector<double> lambda_grid;
    bool lambda_is_grid = false;
    std::vector<double> rho_grid;
    bool rho_is_grid = false;
    double x_test = 1.0;
    double epsilon = 1e-6;
    std::size_t n_samples = 10000;

    /// Structural invariants: non-empty grids, positive sigma_lower_sq,
    /// epsilon > 0, n_samples >= 100.
    void validate() const;

    /// Ambiguity interval for one grid point. The lower bound is capped at
    /// the row's upper variance so small-sigma grid points stay feasible
    /// (the lower bound does not enter the concave-regime solution).
    AmbiguityBounds bounds_for(double sigma_upper_sq) const;

    double scalar_lambda() const; ///< throws when lambda was given as a grid
    double scalar_rho() const;    ///< throws when rho was given as a grid
    double scalar_sigma_upper_sq() const;
};

VerificationConfig parse_config(std::string_view text);
VerificationConfig load_config(const std::string& path);

} // namespace exlq

#pragma once

#include "exlq/config.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace exlq {

enum class Mode { A, B, C, D };

std::string mode_name(Mode mode);

struct CriterionResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

/// Numeric table plus plot-ready density curves plus the per-criterion
/// summary. Boolean verdicts are 0/1 columns; failed grid points carry NaN
/// in their value columns. Reports are deterministic given (config, seed).
struct VerificationReport {
    Mode mode = Mode::A;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::vector<std::string> density_columns;
    std::vector<std::vector<double>> density_rows;
    std::vector<CriterionResult> summary;

    bool passed() const;
};

/// Gaussian-policy verification with normality tests per sigma-bar grid
/// point. Ill-posed grid points are recorded as failed rows.
VerificationReport run_mode_a(const VerificationConfig& cfg, std::uint64_t seed);

/// Discount-rate sensitivity along a strictly ascending rho grid. Throws
/// when fewer than two grid points are admissible.
VerificationReport run_mode_b(const VerificationConfig& cfg);

/// Policy-distribution convergence along a strictly descending positive
/// lambda grid (one trailing 0 allowed as the analytic Dirac limit).
VerificationReport run_mode_c(const VerificationConfig& cfg);

/// Value-function convergence along the same lambda-grid convention.
VerificationReport run_mode_d(const VerificationConfig& cfg);

/// Writes mode_<x>.csv, density_mode_<x>.csv (when curves exist) and
/// summary.txt under out_dir (created if missing).
void write_report(const VerificationReport& report, const std::string& out_dir);

} // namespace exlq

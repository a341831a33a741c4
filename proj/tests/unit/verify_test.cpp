#include "exlq/verify.hpp"

#include "exlq/lq.hpp"
#include "exlq/stability.hpp"

#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

using namespace exlq;

namespace {

VerificationConfig base_config() {
    return parse_config(R"(
[model]
A=-0.2
F=0.8
C=0.5
D=1.2
M=10
I=0.3
K=2
P=0.5
Q=0.2
[ambiguity]
sigma_lower_sq = 0.01
sigma_upper_grid = 0.1, 0.5, 1.0
[agent]
lambda = 0.6
rho = 0.3
[test]
x_test = 1.0
epsilon = 1e-6
N = 10000
)");
}

std::size_t column(const VerificationReport& r, const std::string& name) {
    for (std::size_t i = 0; i < r.columns.size(); ++i) {
        if (r.columns[i] == name) {
            return i;
        }
    }
    throw std::runtime_error("missing column " + name);
}

} // namespace

TEST_CASE("mode A passes on the reference parameters") {
    const VerificationConfig cfg = base_config();
    const VerificationReport report = run_mode_a(cfg, 2024);
    CHECK(report.passed());
    REQUIRE(report.rows.size() == 3);
    const std::size_t var_col = column(report, "sigma_pol");
    CHECK(report.rows[0][var_col] > report.rows[1][var_col]);
    CHECK(report.rows[1][var_col] > report.rows[2][var_col]);
    const std::size_t ks_col = column(report, "ks_p");
    for (const auto& row : report.rows) {
        CHECK(row[ks_col] > 0.05);
    }
    CHECK_FALSE(report.density_rows.empty());

    // deterministic given (config, seed)
    const VerificationReport replay = run_mode_a(cfg, 2024);
    REQUIRE(replay.rows.size() == report.rows.size());
    for (std::size_t i = 0; i < report.rows.size(); ++i) {
        CHECK(replay.rows[i] == report.rows[i]);
    }
    const VerificationReport reseeded = run_mode_a(cfg, 2025);
    CHECK(reseeded.rows[0][column(report, "ks_stat")] !=
          report.rows[0][column(report, "ks_stat")]);
}

TEST_CASE("mode A with a single degenerate-interval point still passes") {
    VerificationConfig cfg = base_config();
    cfg.sigma_upper_sq_grid = {0.01}; // equals sigma_lower_sq: classical reduction
    const VerificationReport report = run_mode_a(cfg, 7);
    CHECK(report.passed());
    CHECK(report.rows.size() == 1);
}

TEST_CASE("mode A flags invalid model parameters per row and fails overall") {
    VerificationConfig cfg = base_config();
    cfg.model.K = -2.0;
    const VerificationReport report = run_mode_a(cfg, 7);
    CHECK_FALSE(report.passed());
    REQUIRE(report.rows.size() == 3);
    const std::size_t ok_col = column(report, "row_ok");
    for (const auto& row : report.rows) {
        CHECK(row[ok_col] == 0.0);
        CHECK(std::isnan(row[column(report, "k2")]));
    }
}

TEST_CASE("mode B tracks the discount-rate sensitivity") {
    VerificationConfig cfg = base_config();
    cfg.sigma_upper_sq_grid = {1.0};
    cfg.sigma_is_grid = false;
    cfg.rho_grid = {0.1, 0.3, 0.8, 1.5};
    cfg.rho_is_grid = true;
    const VerificationReport report = run_mode_b(cfg);
    CHECK(report.passed());
    REQUIRE(report.rows.size() == 4);
    const std::size_t var_col = column(report, "variance");
    CHECK(report.rows[0][var_col] == doctest::Approx(0.28).epsilon(0.08));
    CHECK(report.rows[3][var_col] == doctest::Approx(0.07).epsilon(0.30));
    for (std::size_t i = 1; i < 4; ++i) {
        CHECK(report.rows[i][var_col] < report.rows[i - 1][var_col]);
    }
    // the mean moves with rho as well
    const std::size_t mu_col = column(report, "mu");
    CHECK(report.rows[0][mu_col] != report.rows[3][mu_col]);
}

TEST_CASE("mode B rejects unsorted or duplicated rho grids") {
    VerificationConfig cfg = base_config();
    cfg.sigma_upper_sq_grid = {1.0};
    cfg.sigma_is_grid = false;
    cfg.rho_grid = {0.3, 0.3};
    cfg.rho_is_grid = true;
    CHECK_THROWS_AS(run_mode_b(cfg), InvalidParameter);
    cfg.rho_grid = {0.8, 0.3};
    CHECK_THROWS_AS(run_mode_b(cfg), InvalidParameter);
    cfg.rho_grid = {0.3};
    CHECK_THROWS_AS(run_mode_b(cfg), InvalidParameter);
}

TEST_CASE("mode B requires two admissible grid points") {
    // uncontrolled unstable model: alpha = 2A = 0.2, so rho = 0.1 is
    // inadmissible and only rho = 0.3 survives
    VerificationConfig cfg = base_config();
    cfg.model = RawModel{0.1, 0.0, 0.0, 0.0, 10.0, 0.0, 2.0, 0.0, 0.0};
    cfg.sigma_upper_sq_grid = {1.0};
    cfg.sigma_is_grid = false;
    cfg.rho_grid = {0.1, 0.3};
    cfg.rho_is_grid = true;
    CHECK_THROWS_AS(run_mode_b(cfg), InvalidParameter);
}

TEST_CASE("mode C tracks the vanishing-exploration policy width") {
    VerificationConfig cfg = base_config();
    cfg.lambda_grid = {0.01, 0.005, 0.001, 0.0};
    cfg.lambda_is_grid = true;
    const VerificationReport report = run_mode_c(cfg);
    CHECK(report.passed());
    REQUIRE(report.rows.size() == 12);
    const std::size_t pol_col = column(report, "sigma_pol");
    const std::size_t lam_col = column(report, "lambda");
    const std::size_t mu_col = column(report, "mu");
    for (std::size_t si = 0; si < 3; ++si) {
        for (std::size_t li = 1; li < 4; ++li) {
            const auto& row = report.rows[si * 4 + li];
            const auto& prev = report.rows[si * 4 + li - 1];
            CHECK(row[pol_col] < prev[pol_col]);
            CHECK(row[mu_col] == doctest::Approx(prev[mu_col]).epsilon(1e-12));
        }
        CHECK(report.rows[si * 4 + 3][lam_col] == 0.0);
        CHECK(report.rows[si * 4 + 3][pol_col] == 0.0); // Dirac limit row
    }
    // density curves only for positive lambda
    CHECK(report.density_rows.size() == 3 * 3 * 201);
}

TEST_CASE("modes C and D reject bad lambda grids") {
    VerificationConfig cfg = base_config();
    cfg.lambda_is_grid = true;
    cfg.lambda_grid = {0.001, 0.005};
    CHECK_THROWS_AS(run_mode_c(cfg), InvalidParameter);
    CHECK_THROWS_AS(run_mode_d(cfg), InvalidParameter);
    cfg.lambda_grid = {0.01, 0.0, 0.001};
    CHECK_THROWS_AS(run_mode_c(cfg), InvalidParameter);
}

TEST_CASE("mode D converges the value functions and matches the gap formula") {
    VerificationConfig cfg = base_config();
    cfg.lambda_grid = {0.01, 0.005, 0.001, 0.0};
    cfg.lambda_is_grid = true;
    const VerificationReport report = run_mode_d(cfg);
    CHECK(report.passed());
    const std::size_t gap_col = column(report, "abs_gap");
    const std::size_t match_col = column(report, "formula_match");
    for (std::size_t si = 0; si < 3; ++si) {
        for (std::size_t li = 0; li < 4; ++li) {
            const auto& row = report.rows[si * 4 + li];
            CHECK(row[match_col] == 1.0);
            if (li > 0 && li < 3) {
                CHECK(row[gap_col] < report.rows[si * 4 + li - 1][gap_col]);
            }
        }
        CHECK(report.rows[si * 4 + 3][gap_col] == 0.0);
    }
}

TEST_CASE("mode D gap hits -lambda/(2 rho) when the log argument is 1") {
    VerificationConfig cfg = base_config();
    cfg.sigma_upper_sq_grid = {1.0};
    const ModelParams m = cfg.model.validated();
    const AmbiguityBounds b = cfg.bounds_for(1.0);
    const double k2 = solve_k2(m, b, 0.3);
    const double margin = m.K - k2 * m.D * m.D * 1.0;
    const double lambda = margin / (2.0 * std::numbers::pi * std::numbers::e);
    cfg.lambda_grid = {lambda};
    cfg.lambda_is_grid = true;
    const VerificationReport report = run_mode_d(cfg);
    const double gap = report.rows[0][column(report, "gap")];
    CHECK(gap == doctest::Approx(-lambda / 0.6).epsilon(1e-12));
}

TEST_CASE("write_report emits csv and summary files") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "exlq_report_test";
    fs::remove_all(dir);

    VerificationConfig cfg = base_config();
    const VerificationReport report = run_mode_a(cfg, 1);
    write_report(report, dir.string());

    REQUIRE(fs::exists(dir / "mode_a.csv"));
    REQUIRE(fs::exists(dir / "density_mode_a.csv"));
    REQUIRE(fs::exists(dir / "summary.txt"));

    std::ifstream csv(dir / "mode_a.csv");
    std::string header;
    std::getline(csv, header);
    CHECK(header.rfind("sigma_bar,", 0) == 0);
    std::size_t rows = 0;
    std::string line;
    while (std::getline(csv, line)) {
        ++rows;
    }
    CHECK(rows == report.rows.size());

    std::ifstream summary(dir / "summary.txt");
    std::stringstream buffer;
    buffer << summary.rdbuf();
    CHECK(buffer.str().find("overall: PASS") != std::string::npos);
    CHECK(buffer.str().find("K-S p-value > 0.05") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("reports are stable across worker counts") {
    const VerificationConfig cfg = base_config();
    setenv("EXLQ_WORKERS", "1", 1);
    const VerificationReport serial = run_mode_a(cfg, 11);
    setenv("EXLQ_WORKERS", "3", 1);
    const VerificationReport parallel = run_mode_a(cfg, 11);
    unsetenv("EXLQ_WORKERS");
    REQUIRE(serial.rows.size() == parallel.rows.size());
    for (std::size_t i = 0; i < serial.rows.size(); ++i) {
        CHECK(serial.rows[i] == parallel.rows[i]);
    }
}

#include "exlq/verify.hpp"

#include "exlq/lq.hpp"
#include "exlq/parallel.hpp"
#include "exlq/rng.hpp"
#include "exlq/stability.hpp"
#include "exlq/stats_tests.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>

namespace exlq {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr std::uint64_t kVerifyKind = 3;
constexpr int kDensityPoints = 201;

struct SolvedPoint {
    bool ok = false;
    std::string error;
    HjbCoefficients coeffs{kNaN, kNaN, kNaN};
    double mu = kNaN;
    double sigma_pol = kNaN;
    double variance = kNaN;
    double alpha = kNaN;
    bool rho_gt_alpha = false;
    bool k2_negative = false;
    bool wellposed = false;
};

SolvedPoint solve_point(const VerificationConfig& cfg, double sigma_upper_sq, double lambda,
                        double rho) {
    SolvedPoint point;
    try {
        const ModelParams m = cfg.model.validated();
        const AmbiguityBounds b = cfg.bounds_for(sigma_upper_sq);
        const double k2 = solve_k2(m, b, rho);
        const double k1 = compute_k1(k2, m, b, rho);
        const double margin = m.K - k2 * m.D * m.D * b.sigma_upper_sq;
        point.k2_negative = k2 < 0.0;
        point.wellposed = margin > 0.0;
        const double k0 = lambda > 0.0 ? compute_k0(k1, k2, m, b, rho, lambda)
                                       : (k1 * m.F - m.Q) * (k1 * m.F - m.Q) / (rho * margin);
        point.coeffs = {k2, k1, k0};
        const GaussianPolicy pol = optimal_policy(cfg.x_test, point.coeffs, m, b, lambda);
        point.mu = pol.mean;
        point.variance = pol.variance;
        point.sigma_pol = std::sqrt(pol.variance);
        const StabilityCoefficients sc =
            stability_coefficients(point.coeffs, m, b, lambda, true);
        point.alpha = sc.alpha;
        point.rho_gt_alpha = check_admissibility(rho, sc).admissible;
        point.ok = true;
    } catch (const Error& e) {
        point.error = e.what();
    }
    return point;
}

void append_density_rows(VerificationReport& report, const std::vector<double>& key,
                         double mu, double sigma_pol) {
    if (!(sigma_pol > 0.0)) {
        return; // Dirac limit row: no curve
    }
    const double lo = mu - 4.0 * sigma_pol;
    const double hi = mu + 4.0 * sigma_pol;
    const double norm = 1.0 / (sigma_pol * std::sqrt(2.0 * std::numbers::pi));
    for (int i = 0; i < kDensityPoints; ++i) {
        const double u = lo + (hi - lo) * static_cast<double>(i) / (kDensityPoints - 1);
        const double z = (u - mu) / sigma_pol;
        std::vector<double> row = key;
        row.push_back(u);
        row.push_back(norm * std::exp(-0.5 * z * z));
        report.density_rows.push_back(std::move(row));
    }
}

bool strictly_decreasing(const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (!(v[i] < v[i - 1]) || !std::isfinite(v[i]) || !std::isfinite(v[i - 1])) {
            return false;
        }
    }
    return true;
}

void push_criterion(VerificationReport& report, std::string name, bool pass,
                    std::string detail = {}) {
    report.summary.push_back({std::move(name), pass, std::move(detail)});
}

void append_stability_criteria(VerificationReport& report, const std::vector<SolvedPoint>& pts) {
    const bool all_adm = std::all_of(pts.begin(), pts.end(),
                                     [](const SolvedPoint& p) { return p.ok && p.rho_gt_alpha; });
    const bool all_neg = std::all_of(pts.begin(), pts.end(),
                                     [](const SolvedPoint& p) { return p.ok && p.k2_negative; });
    const bool all_wp = std::all_of(pts.begin(), pts.end(),
                                    [](const SolvedPoint& p) { return p.ok && p.wellposed; });
    push_criterion(report, "stability: rho > alpha at every grid point", all_adm);
    push_criterion(report, "stability: k2 < 0 at every grid point", all_neg);
    push_criterion(report, "stability: K - k2 D^2 sigma_bar^2 > 0 at every grid point", all_wp);
}

/// Checks the lambda-grid convention shared by modes C and D: strictly
/// descending, strictly positive except an optional trailing literal 0.
void check_lambda_grid(const std::vector<double>& grid) {
    if (grid.empty()) {
        throw InvalidParameter("lambda grid is empty");
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const bool last = i + 1 == grid.size();
        if (!(grid[i] > 0.0) && !(last && grid[i] == 0.0)) {
            throw InvalidParameter("lambda grid entries must be strictly positive "
                                   "(a single trailing 0 is allowed)");
        }
        if (i > 0 && !(grid[i] < grid[i - 1])) {
            throw InvalidParameter("lambda grid must be strictly descending");
        }
    }
}

std::string format_number(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

} // namespace

std::string mode_name(Mode mode) {
    switch (mode) {
        case Mode::A: return "a";
        case Mode::B: return "b";
        case Mode::C: return "c";
        case Mode::D: return "d";
    }
    return "?";
}

bool VerificationReport::passed() const {
    return std::all_of(summary.begin(), summary.end(),
                       [](const CriterionResult& c) { return c.pass; });
}

VerificationReport run_mode_a(const VerificationConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    const double lambda = cfg.scalar_lambda();
    const double rho = cfg.scalar_rho();

    VerificationReport report;
    report.mode = Mode::A;
    report.columns = {"sigma_bar", "k2",      "k1",      "k0",      "mu",     "sigma_pol",
                      "alpha",     "rho_gt_alpha", "k2_negative", "wellposed", "ks_stat",
                      "ks_p",      "ks_pass", "ad_stat", "ad_pass", "row_ok"};
    report.density_columns = {"sigma_bar", "u", "pdf"};

    const std::size_t n_rows = cfg.sigma_upper_sq_grid.size();
    std::vector<SolvedPoint> points(n_rows);
    std::vector<KsResult> ks(n_rows);
    std::vector<AdResult> ad(n_rows);

    parallel_for(n_rows, [&](std::size_t i) {
        points[i] = solve_point(cfg, cfg.sigma_upper_sq_grid[i], lambda, rho);
        if (!points[i].ok) {
            return;
        }
        std::vector<double> samples(cfg.n_samples);
        const std::uint64_t stream = rng::stream_id(kVerifyKind, i, 0);
        for (std::size_t j = 0; j < samples.size(); ++j) {
            samples[j] = points[i].mu +
                         points[i].sigma_pol * rng::standard_normal(seed, stream, j);
        }
        ks[i] = ks_test(samples, points[i].mu, points[i].sigma_pol);
        ad[i] = ad_test(samples, points[i].mu, points[i].sigma_pol);
    });

    std::vector<double> variances;
    bool all_ks = true;
    bool all_ad = true;
    for (std::size_t i = 0; i < n_rows; ++i) {
        const SolvedPoint& p = points[i];
        const bool ks_pass = p.ok && ks[i].p_value > 0.05;
        const bool ad_pass = p.ok && ad[i].pass;
        all_ks &= ks_pass;
        all_ad &= ad_pass;
        const bool row_ok = p.ok && ks_pass && ad_pass && p.rho_gt_alpha && p.k2_negative &&
                            p.wellposed;
        report.rows.push_back({std::sqrt(cfg.sigma_upper_sq_grid[i]), p.coeffs.k2, p.coeffs.k1,
                               p.coeffs.k0, p.mu, p.sigma_pol, p.alpha,
                               p.ok && p.rho_gt_alpha ? 1.0 : 0.0,
                               p.ok && p.k2_negative ? 1.0 : 0.0,
                               p.ok && p.wellposed ? 1.0 : 0.0,
                               p.ok ? ks[i].statistic : kNaN, p.ok ? ks[i].p_value : kNaN,
                               ks_pass ? 1.0 : 0.0, p.ok ? ad[i].statistic : kNaN,
                               ad_pass ? 1.0 : 0.0, row_ok ? 1.0 : 0.0});
        if (p.ok) {
            append_density_rows(report, {std::sqrt(cfg.sigma_upper_sq_grid[i])}, p.mu,
                                p.sigma_pol);
            variances.push_back(p.variance);
        } else {
            variances.push_back(kNaN);
        }
    }

    push_criterion(report, "normality: K-S p-value > 0.05 at every grid point", all_ks);
    push_criterion(report, "normality: A-D statistic < critical value at every grid point",
                   all_ad);
    append_stability_criteria(report, points);
    if (n_rows >= 2) {
        // evaluate the sensitivity sign on the ascending sigma-bar ordering
        std::vector<std::size_t> order(n_rows);
        for (std::size_t i = 0; i < n_rows; ++i) {
            order[i] = i;
        }
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return cfg.sigma_upper_sq_grid[a] < cfg.sigma_upper_sq_grid[b];
        });
        std::vector<double> sorted_var;
        sorted_var.reserve(n_rows);
        for (std::size_t i : order) {
            sorted_var.push_back(variances[i]);
        }
        push_criterion(report, "sensitivity: policy variance strictly decreasing in sigma_bar",
                       strictly_decreasing(sorted_var));
    }
    return report;
}

VerificationReport run_mode_b(const VerificationConfig& cfg) {
    cfg.validate();
    const double lambda = cfg.scalar_lambda();
    const double sigma_upper_sq = cfg.scalar_sigma_upper_sq();
    const std::vector<double>& rhos = cfg.rho_grid;
    if (rhos.size() < 2) {
        throw InvalidParameter("mode B: need at least 2 rho grid points");
    }
    for (std::size_t i = 1; i < rhos.size(); ++i) {
        if (!(rhos[i] > rhos[i - 1])) {
            throw InvalidParameter("mode B: rho grid not strictly sorted ascending");
        }
    }

    VerificationReport report;
    report.mode = Mode::B;
    report.columns = {"rho",       "k2",    "k1",          "k0",        "mu",
                      "sigma_pol", "variance", "alpha", "rho_gt_alpha", "k2_negative",
                      "wellposed", "row_ok"};
    report.density_columns = {"rho", "u", "pdf"};

    std::vector<SolvedPoint> points(rhos.size());
    parallel_for(rhos.size(),
                 [&](std::size_t i) { points[i] = solve_point(cfg, sigma_upper_sq, lambda, rhos[i]); });

    std::size_t admissible = 0;
    std::vector<double> variances;
    for (std::size_t i = 0; i < rhos.size(); ++i) {
        const SolvedPoint& p = points[i];
        const bool row_ok = p.ok && p.rho_gt_alpha && p.k2_negative && p.wellposed;
        admissible += row_ok ? 1 : 0;
        report.rows.push_back({rhos[i], p.coeffs.k2, p.coeffs.k1, p.coeffs.k0, p.mu, p.sigma_pol,
                               p.variance, p.alpha, p.ok && p.rho_gt_alpha ? 1.0 : 0.0,
                               p.ok && p.k2_negative ? 1.0 : 0.0, p.ok && p.wellposed ? 1.0 : 0.0,
                               row_ok ? 1.0 : 0.0});
        variances.push_back(p.ok ? p.variance : kNaN);
        if (p.ok) {
            append_density_rows(report, {rhos[i]}, p.mu, p.sigma_pol);
        }
    }
    if (admissible < 2) {
        throw InvalidParameter("mode B: fewer than 2 admissible rho grid points");
    }

    append_stability_criteria(report, points);
    push_criterion(report, "sensitivity: policy variance strictly decreasing in rho",
                   strictly_decreasing(variances));
    return report;
}

VerificationReport run_mode_c(const VerificationConfig& cfg) {
    cfg.validate();
    const double rho = cfg.scalar_rho();
    check_lambda_grid(cfg.lambda_grid);

    VerificationReport report;
    report.mode = Mode::C;
    report.columns = {"sigma_bar",   "lambda",      "mu",        "sigma_pol",
                      "scale_ratio", "rho_gt_alpha", "k2_negative", "wellposed", "row_ok"};
    report.density_columns = {"sigma_bar", "lambda", "u", "pdf"};

    const std::size_t n_sigma = cfg.sigma_upper_sq_grid.size();
    const std::size_t n_lambda = cfg.lambda_grid.size();
    std::vector<SolvedPoint> points(n_sigma * n_lambda);
    parallel_for(points.size(), [&](std::size_t idx) {
        const std::size_t si = idx / n_lambda;
        const std::size_t li = idx % n_lambda;
        points[idx] =
            solve_point(cfg, cfg.sigma_upper_sq_grid[si], cfg.lambda_grid[li], rho);
    });

    bool all_monotone = true;
    bool ratio_constant = true;
    bool mean_invariant = true;
    for (std::size_t si = 0; si < n_sigma; ++si) {
        const double sigma_bar = std::sqrt(cfg.sigma_upper_sq_grid[si]);
        std::vector<double> sigma_pols;
        double ratio_ref = kNaN;
        double mean_ref = kNaN;
        for (std::size_t li = 0; li < n_lambda; ++li) {
            const SolvedPoint& p = points[si * n_lambda + li];
            const double lambda = cfg.lambda_grid[li];
            const double ratio = lambda > 0.0 && p.ok ? p.sigma_pol / std::sqrt(lambda) : kNaN;
            const bool row_ok = p.ok && p.rho_gt_alpha && p.k2_negative && p.wellposed;
            report.rows.push_back({sigma_bar, lambda, p.mu, p.sigma_pol, ratio,
                                   p.ok && p.rho_gt_alpha ? 1.0 : 0.0,
                                   p.ok && p.k2_negative ? 1.0 : 0.0,
                                   p.ok && p.wellposed ? 1.0 : 0.0, row_ok ? 1.0 : 0.0});
            if (!p.ok) {
                all_monotone = false;
                ratio_constant = false;
                mean_invariant = false;
                continue;
            }
            sigma_pols.push_back(p.sigma_pol);
            if (lambda > 0.0) {
                if (std::isnan(ratio_ref)) {
                    ratio_ref = ratio;
                } else if (std::abs(ratio - ratio_ref) > cfg.epsilon * std::abs(ratio_ref)) {
                    ratio_constant = false;
                }
                append_density_rows(report, {sigma_bar, lambda}, p.mu, p.sigma_pol);
            }
            if (std::isnan(mean_ref)) {
                mean_ref = p.mu;
            } else if (std::abs(p.mu - mean_ref) > cfg.epsilon * std::max(1.0, std::abs(mean_ref))) {
                mean_invariant = false;
            }
        }
        all_monotone &= strictly_decreasing(sigma_pols);
    }

    push_criterion(report,
                   "convergence: sigma_pol strictly decreasing along descending lambda",
                   all_monotone);
    push_criterion(report, "scaling: sigma_pol / sqrt(lambda) constant across the lambda grid",
                   ratio_constant);
    push_criterion(report, "policy mean invariant across the lambda grid", mean_invariant);
    append_stability_criteria(report, points);
    return report;
}

VerificationReport run_mode_d(const VerificationConfig& cfg) {
    cfg.validate();
    const double rho = cfg.scalar_rho();
    check_lambda_grid(cfg.lambda_grid);

    VerificationReport report;
    report.mode = Mode::D;
    report.columns = {"sigma_bar", "lambda",    "value",     "value_ne", "gap",
                      "abs_gap",   "gap_formula", "formula_match", "row_ok"};

    const std::size_t n_sigma = cfg.sigma_upper_sq_grid.size();
    const std::size_t n_lambda = cfg.lambda_grid.size();
    std::vector<SolvedPoint> points(n_sigma * n_lambda);
    parallel_for(points.size(), [&](std::size_t idx) {
        const std::size_t si = idx / n_lambda;
        const std::size_t li = idx % n_lambda;
        points[idx] =
            solve_point(cfg, cfg.sigma_upper_sq_grid[si], cfg.lambda_grid[li], rho);
    });

    bool all_monotone = true;
    bool all_formula = true;
    for (std::size_t si = 0; si < n_sigma; ++si) {
        const double sigma_bar = std::sqrt(cfg.sigma_upper_sq_grid[si]);
        std::vector<double> abs_gaps;
        for (std::size_t li = 0; li < n_lambda; ++li) {
            const SolvedPoint& p = points[si * n_lambda + li];
            const double lambda = cfg.lambda_grid[li];
            if (!p.ok) {
                report.rows.push_back({sigma_bar, lambda, kNaN, kNaN, kNaN, kNaN, kNaN, 0.0, 0.0});
                all_monotone = false;
                all_formula = false;
                continue;
            }
            double value = kNaN;
            double value_ne = kNaN;
            double gap = kNaN;
            double formula = kNaN;
            bool formula_match = false;
            try {
                const ModelParams m = cfg.model.validated();
                const AmbiguityBounds b = cfg.bounds_for(cfg.sigma_upper_sq_grid[si]);
                value = exploratory_value(cfg.x_test, p.coeffs);
                if (lambda > 0.0) {
                    const AgentParams agent(lambda, rho);
                    value_ne = non_exploratory_value(cfg.x_test, p.coeffs, m, b, agent);
                    gap = value - value_ne;
                    formula = value_gap(p.coeffs, m, b, agent);
                } else {
                    // analytic Dirac limit: the lambda terms cancel exactly
                    value_ne = value;
                    gap = 0.0;
                    formula = 0.0;
                }
                formula_match = std::abs(gap - formula) <= 1e-12 * std::max(1.0, std::abs(formula));
            } catch (const Error&) {
                all_formula = false;
            }
            const bool row_ok = p.ok && p.rho_gt_alpha && p.k2_negative && p.wellposed &&
                                formula_match;
            report.rows.push_back({sigma_bar, lambda, value, value_ne, gap, std::abs(gap),
                                   formula, formula_match ? 1.0 : 0.0, row_ok ? 1.0 : 0.0});
            all_formula &= formula_match;
            if (lambda > 0.0) {
                abs_gaps.push_back(std::abs(gap));
            }
        }
        all_monotone &= strictly_decreasing(abs_gaps);
    }

    push_criterion(report,
                   "convergence: |V - V_ne| strictly decreasing along descending lambda",
                   all_monotone);
    push_criterion(report, "value gap matches the closed form to 1e-12", all_formula);
    append_stability_criteria(report, points);
    return report;
}

void write_report(const VerificationReport& report, const std::string& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    const std::string tag = mode_name(report.mode);

    {
        std::ofstream csv(fs::path(out_dir) / ("mode_" + tag + ".csv"));
        for (std::size_t i = 0; i < report.columns.size(); ++i) {
            csv << (i ? "," : "") << report.columns[i];
        }
        csv << '\n';
        for (const auto& row : report.rows) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                csv << (i ? "," : "") << format_number(row[i]);
            }
            csv << '\n';
        }
    }

    if (!report.density_rows.empty()) {
        std::ofstream csv(fs::path(out_dir) / ("density_mode_" + tag + ".csv"));
        for (std::size_t i = 0; i < report.density_columns.size(); ++i) {
            csv << (i ? "," : "") << report.density_columns[i];
        }
        csv << '\n';
        for (const auto& row : report.density_rows) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                csv << (i ? "," : "") << format_number(row[i]);
            }
            csv << '\n';
        }
    }

    {
        std::ofstream summary(fs::path(out_dir) / "summary.txt");
        summary << "mode " << tag << " verification summary\n";
        for (const auto& c : report.summary) {
            summary << c.name << ": " << (c.pass ? "PASS" : "FAIL");
            if (!c.detail.empty()) {
                summary << " (" << c.detail << ")";
            }
            summary << '\n';
        }
        summary << "overall: " << (report.passed() ? "PASS" : "FAIL") << '\n';
    }
}

} // namespace exlq

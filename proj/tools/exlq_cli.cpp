#include "exlq/config.hpp"
#include "exlq/lq.hpp"
#include "exlq/scenario.hpp"
#include "exlq/simulation.hpp"
#include "exlq/stability.hpp"
#include "exlq/verify.hpp"
#include "exlq/volatility.hpp"

#include "CLI11.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <string>
#include <vector>

namespace {

using namespace exlq;

std::vector<double> read_observations(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open data file '" + path + "'");
    }
    std::vector<double> data;
    std::string token;
    while (in >> token) {
        try {
            std::size_t used = 0;
            const double v = std::stod(token, &used);
            if (used != token.size()) {
                throw std::invalid_argument(token);
            }
            data.push_back(v);
        } catch (const std::exception&) {
            throw ConfigError("data file '" + path + "': cannot parse '" + token + "'");
        }
    }
    return data;
}

struct SolvedProblem {
    ModelParams model;
    AmbiguityBounds bounds;
    AgentParams agent;
    HjbCoefficients coeffs;
};

SolvedProblem solve_from_config(const std::string& path, std::size_t root_index) {
    const VerificationConfig cfg = load_config(path);
    const ModelParams m = cfg.model.validated();
    const AmbiguityBounds b = cfg.bounds_for(cfg.scalar_sigma_upper_sq());
    const AgentParams agent(cfg.scalar_lambda(), cfg.scalar_rho());
    const double k2 = solve_k2(m, b, agent.rho, root_index);
    const double k1 = compute_k1(k2, m, b, agent.rho);
    const double k0 = compute_k0(k1, k2, m, b, agent.rho, agent.lambda);
    return {m, b, agent, {k2, k1, k0}};
}

int cmd_estimate_bounds(const std::string& datafile, std::size_t batches) {
    const std::vector<double> data = read_observations(datafile);
    const BatchedSamples samples = BatchedSamples::with_batch_count(data, batches);
    const BoundsEstimate est = estimate_bounds(samples);
    if (est.discarded > 0) {
        std::cerr << "warning: discarded " << est.discarded
                  << " trailing observations beyond " << batches << " x "
                  << samples.batch_size() << "\n";
    }
    if (est.degenerate_lower) {
        std::cerr << "warning: lower variance estimate is 0 (constant batch); the interval "
                     "is degenerate\n";
    }
    std::cout << std::setprecision(17);
    std::cout << "observations = " << data.size() << "\n";
    std::cout << "batches = " << batches << "\n";
    std::cout << "batch_size = " << samples.batch_size() << "\n";
    std::cout << "sigma_lower_sq = " << est.lower_sq << "\n";
    std::cout << "sigma_upper_sq = " << est.upper_sq << "\n";
    return 0;
}

int cmd_solve(const std::string& config, std::size_t root_index) {
    const SolvedProblem p = solve_from_config(config, root_index);
    const VerificationConfig cfg = load_config(config);
    const auto roots = find_k2_roots(p.model, p.bounds, p.agent.rho);
    const StabilityCoefficients sc =
        stability_coefficients(p.coeffs, p.model, p.bounds, p.agent.lambda, true);
    const Admissibility adm = check_admissibility(p.agent.rho, sc);

    std::cout << std::setprecision(17);
    std::cout << "k2 = " << p.coeffs.k2 << "\n";
    std::cout << "k1 = " << p.coeffs.k1 << "\n";
    std::cout << "k0 = " << p.coeffs.k0 << "\n";
    std::cout << "residual = " << k2_residual(p.coeffs.k2, p.model, p.bounds, p.agent.rho)
              << "\n";
    std::cout << "admissible_roots = " << roots.size() << "\n";
    for (std::size_t i = 0; i < roots.size(); ++i) {
        std::cout << "root[" << i << "] = " << roots[i] << "\n";
    }
    std::cout << "alpha = " << sc.alpha << "\n";
    std::cout << "rho_gt_alpha = " << (adm.admissible ? "yes" : "no") << "\n";
    std::cout << "value_at_x_test = " << exploratory_value(cfg.x_test, p.coeffs) << "\n";
    return 0;
}

int cmd_policy(const std::string& config, double x, std::size_t root_index) {
    const SolvedProblem p = solve_from_config(config, root_index);
    const GaussianPolicy pol = optimal_policy(x, p.coeffs, p.model, p.bounds, p.agent.lambda);
    std::cout << std::setprecision(17);
    std::cout << "x = " << x << "\n";
    std::cout << "mean = " << pol.mean << "\n";
    std::cout << "variance = " << pol.variance << "\n";
    std::cout << "stddev = " << std::sqrt(pol.variance) << "\n";
    std::cout << "deterministic_control = "
              << non_exploratory_control(x, p.coeffs, p.model, p.bounds) << "\n";
    std::cout << "value = " << exploratory_value(x, p.coeffs) << "\n";
    std::cout << "value_ne = "
              << non_exploratory_value(x, p.coeffs, p.model, p.bounds, p.agent) << "\n";
    return 0;
}

int cmd_simulate(const std::string& config, const std::string& scenario_kind,
                 std::uint64_t seed, bool classical, double x0, double dt, double horizon,
                 std::size_t paths, std::size_t store_every, std::size_t segments,
                 double sigma_override, const std::string& out_path) {
    const SolvedProblem p = solve_from_config(config, 0);

    VolatilityScenario scenario = VolatilityScenario::constant(1.0);
    if (scenario_kind == "constant") {
        const double sigma = sigma_override > 0.0 ? sigma_override
                                                  : std::sqrt(p.bounds.sigma_upper_sq);
        scenario = VolatilityScenario::constant(sigma);
    } else if (scenario_kind == "piecewise") {
        scenario = scenario_family(p.bounds, 1, segments, horizon, seed).back();
    } else {
        throw ConfigError("unknown scenario kind '" + scenario_kind +
                          "' (expected constant|piecewise)");
    }

    SimConfig cfg;
    cfg.dt = dt;
    cfg.horizon = horizon;
    cfg.n_paths = paths;
    cfg.seed = seed;
    cfg.store_every = store_every;

    const PathEnsemble ensemble =
        classical
            ? simulate_classical(x0, p.coeffs, p.model, p.bounds, scenario, cfg)
            : simulate_exploratory(x0, p.coeffs, p.model, p.bounds, p.agent, scenario, cfg);
    if (!ensemble.rho_admissible) {
        std::cerr << "warning: rho <= alpha; the discounted objective may be ill-posed\n";
    }

    if (out_path.empty()) {
        write_csv(std::cout, ensemble);
    } else {
        std::ofstream out(out_path);
        if (!out) {
            throw ConfigError("cannot open output file '" + out_path + "'");
        }
        write_csv(out, ensemble);
        std::cerr << "wrote " << ensemble.states.size() << " paths x "
                  << ensemble.times.size() << " points to " << out_path << "\n";
    }
    return 0;
}

int cmd_verify(const std::string& config, const std::string& mode_str, std::uint64_t seed,
               const std::string& out_dir) {
    const VerificationConfig cfg = load_config(config);
    VerificationReport report;
    if (mode_str == "A" || mode_str == "a") {
        report = run_mode_a(cfg, seed);
    } else if (mode_str == "B" || mode_str == "b") {
        report = run_mode_b(cfg);
    } else if (mode_str == "C" || mode_str == "c") {
        report = run_mode_c(cfg);
    } else if (mode_str == "D" || mode_str == "d") {
        report = run_mode_d(cfg);
    } else {
        throw ConfigError("unknown mode '" + mode_str + "' (expected A|B|C|D)");
    }
    if (!out_dir.empty()) {
        write_report(report, out_dir);
    }
    for (const auto& c : report.summary) {
        std::cout << c.name << ": " << (c.pass ? "PASS" : "FAIL") << "\n";
    }
    std::cout << "overall: " << (report.passed() ? "PASS" : "FAIL") << "\n";
    return report.passed() ? 0 : 1;
}

int cmd_cost(double lambda, double rho) {
    const AgentParams agent(lambda, rho);
    std::cout << std::setprecision(17) << exploration_cost(agent) << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"closed-form exploratory linear-quadratic control under volatility "
                 "uncertainty: solver, simulator and verification harness"};
    app.require_subcommand(1);

    std::string datafile;
    std::size_t batches = 0;
    auto* estimate = app.add_subcommand(
        "estimate-bounds", "estimate the volatility-uncertainty interval from data");
    estimate->add_option("datafile", datafile, "newline-separated real observations")
        ->required();
    estimate->add_option("--batches", batches, "number of batches")->required();

    std::string solve_config;
    std::size_t root_index = 0;
    auto* solve = app.add_subcommand("solve", "solve the value-function coefficients");
    solve->add_option("--config", solve_config, "config file")->required();
    solve->add_option("--root-index", root_index,
                      "admissible root to select (by ascending magnitude)");

    std::string policy_config;
    double policy_x = 0.0;
    std::size_t policy_root = 0;
    auto* policy = app.add_subcommand("policy", "evaluate the optimal randomized policy");
    policy->add_option("--config", policy_config, "config file")->required();
    policy->add_option("--x", policy_x, "state to evaluate at")->required();
    policy->add_option("--root-index", policy_root, "admissible root to select");

    std::string sim_config;
    std::string scenario_kind = "constant";
    std::uint64_t sim_seed = 0;
    bool classical = false;
    double x0 = 1.0;
    double dt = 1e-3;
    double horizon = 20.0;
    std::size_t paths = 10;
    std::size_t store_every = 1;
    std::size_t segments = 8;
    double sigma_override = 0.0;
    std::string sim_out;
    auto* simulate = app.add_subcommand("simulate", "run the closed-loop Euler-Maruyama paths");
    simulate->add_option("--config", sim_config, "config file")->required();
    simulate->add_option("--scenario", scenario_kind, "volatility scenario: constant|piecewise");
    simulate->add_option("--seed", sim_seed, "reproducibility seed");
    simulate->add_flag("--classical", classical, "simulate the deterministic-control loop");
    simulate->add_option("--x0", x0, "initial state");
    simulate->add_option("--dt", dt, "time step");
    simulate->add_option("--horizon", horizon, "total time");
    simulate->add_option("--paths", paths, "number of paths");
    simulate->add_option("--store-every", store_every, "record every n-th grid point");
    simulate->add_option("--segments", segments, "segments for the piecewise scenario");
    simulate->add_option("--sigma", sigma_override,
                         "constant scenario multiplier (default: upper bound)");
    simulate->add_option("--out", sim_out, "output CSV path (default: stdout)");

    std::string verify_config;
    std::string mode;
    std::uint64_t verify_seed = 0;
    std::string out_dir;
    auto* verify = app.add_subcommand("verify", "run a verification mode and write reports");
    verify->add_option("--mode", mode, "verification mode: A|B|C|D")->required();
    verify->add_option("--config", verify_config, "config file")->required();
    verify->add_option("--seed", verify_seed, "reproducibility seed");
    verify->add_option("--out", out_dir, "output directory for CSV reports");

    double cost_lambda = 0.0;
    double cost_rho = 0.0;
    auto* cost = app.add_subcommand("cost", "print the exploration cost");
    cost->add_option("--lambda", cost_lambda, "exploration weight")->required();
    cost->add_option("--rho", cost_rho, "discount rate")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (estimate->parsed()) {
            return cmd_estimate_bounds(datafile, batches);
        }
        if (solve->parsed()) {
            return cmd_solve(solve_config, root_index);
        }
        if (policy->parsed()) {
            return cmd_policy(policy_config, policy_x, policy_root);
        }
        if (simulate->parsed()) {
            return cmd_simulate(sim_config, scenario_kind, sim_seed, classical, x0, dt,
                                horizon, paths, store_every, segments, sigma_override,
                                sim_out);
        }
        if (verify->parsed()) {
            return cmd_verify(verify_config, mode, verify_seed, out_dir);
        }
        if (cost->parsed()) {
            return cmd_cost(cost_lambda, cost_rho);
        }
    } catch (const exlq::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

#include "exlq/simulation.hpp"

#include "exlq/parallel.hpp"
#include "exlq/stability.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <ostream>
#include <string>
#include <system_error>

namespace exlq {

namespace {

// All scenarios share one noise stream per path (common random numbers), so
// per-scenario means are positively correlated and the min/max over the
// family is less noisy than with independent draws.
std::uint64_t noise_stream(std::uint64_t path) {
    return rng::stream_id(rng::kNoiseKind, 0, path);
}
std::uint64_t action_stream(std::uint64_t path) {
    return rng::stream_id(rng::kActionKind, 0, path);
}

std::vector<double> per_step_sigmas(const VolatilityScenario& scenario, double dt,
                                    std::size_t n_steps) {
    std::vector<double> out(n_steps);
    for (std::size_t k = 0; k < n_steps; ++k) {
        out[k] = scenario.sigma_at(dt * static_cast<double>(k));
    }
    return out;
}

void fill_path(const ClosedLoopSde& sde, double x0, std::span<const double> sigmas,
               double dt, std::uint64_t seed, std::uint64_t path,
               std::vector<double>& states) {
    const std::size_t n_steps = sigmas.size();
    states.resize(n_steps + 1);
    const double sqdt = std::sqrt(dt);
    const std::uint64_t stream = noise_stream(path);
    double x = x0;
    states[0] = x;
    for (std::size_t k = 0; k < n_steps; ++k) {
        const double xi = rng::standard_normal(seed, stream, k);
        x += sde.drift(x) * dt + sde.diffusion(x) * sigmas[k] * sqdt * xi;
        if (!std::isfinite(x)) {
            throw SimulationError("path " + std::to_string(path) + " blew up at step " +
                                  std::to_string(k + 1));
        }
        states[k + 1] = x;
    }
}

void for_each_path(const ClosedLoopSde& sde, double x0, const VolatilityScenario& scenario,
                   const SimConfig& cfg,
                   const std::function<void(std::size_t, std::span<const double>,
                                            std::span<const double>)>& fn) {
    const std::size_t n_steps = cfg.n_steps();
    const std::vector<double> sigmas = per_step_sigmas(scenario, cfg.dt, n_steps);
    std::vector<double> times(n_steps + 1);
    for (std::size_t k = 0; k <= n_steps; ++k) {
        times[k] = cfg.dt * static_cast<double>(k);
    }
    parallel_for(cfg.n_paths, [&](std::size_t p) {
        thread_local std::vector<double> states;
        fill_path(sde, x0, sigmas, cfg.dt, cfg.seed, p, states);
        fn(p, times, states);
    });
}

double format_check(double v) { return v; }

void append_double(std::string& line, double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), format_check(v));
    line.append(buf, res.ptr);
}

PathEnsemble materialize(const ClosedLoopSde& sde, double x0, const VolatilityScenario& scenario,
                         const SimConfig& cfg,
                         const std::function<double(std::size_t, std::size_t, double)>& action_at) {
    cfg.validate();
    const std::size_t n_steps = cfg.n_steps();

    std::vector<std::size_t> stored;
    for (std::size_t k = 0; k <= n_steps; k += cfg.store_every) {
        stored.push_back(k);
    }
    if (stored.back() != n_steps) {
        stored.push_back(n_steps);
    }

    PathEnsemble ensemble;
    ensemble.scenario = scenario;
    ensemble.times.resize(stored.size());
    for (std::size_t j = 0; j < stored.size(); ++j) {
        ensemble.times[j] = cfg.dt * static_cast<double>(stored[j]);
    }
    ensemble.states.assign(cfg.n_paths, {});
    ensemble.actions.assign(cfg.n_paths, {});

    for_each_path(sde, x0, scenario, cfg,
                  [&](std::size_t p, std::span<const double>, std::span<const double> states) {
                      auto& s = ensemble.states[p];
                      auto& a = ensemble.actions[p];
                      s.resize(stored.size());
                      a.resize(stored.size());
                      for (std::size_t j = 0; j < stored.size(); ++j) {
                          const std::size_t k = stored[j];
                          s[j] = states[k];
                          a[j] = action_at(p, k, states[k]);
                      }
                  });
    return ensemble;
}

} // namespace

void SimConfig::validate() const {
    if (!(dt > 0.0) || !(horizon > 0.0) || dt > horizon) {
        throw InvalidParameter("SimConfig: require 0 < dt <= horizon");
    }
    if (n_paths < 1) {
        throw InvalidParameter("SimConfig: n_paths must be >= 1");
    }
    if (store_every < 1) {
        throw InvalidParameter("SimConfig: store_every must be >= 1");
    }
}

std::size_t SimConfig::n_steps() const {
    const auto n = static_cast<std::size_t>(std::llround(horizon / dt));
    return std::max<std::size_t>(n, 1);
}

double ClosedLoopSde::diffusion(double x) const {
    const double lin = b1 * x + b2;
    return std::sqrt(lin * lin + c1);
}

ClosedLoopSde exploratory_closed_loop(const HjbCoefficients& c, const ModelParams& m,
                                      const AmbiguityBounds& b, double lambda) {
    const StabilityCoefficients sc = stability_coefficients(c, m, b, lambda, true);
    return {sc.a1, sc.a2, sc.b1, sc.b2, sc.c1};
}

ClosedLoopSde classical_closed_loop(const HjbCoefficients& c, const ModelParams& m,
                                    const AmbiguityBounds& b) {
    const StabilityCoefficients sc = stability_coefficients(c, m, b, 0.0, false);
    return {sc.a1, sc.a2, sc.b1, sc.b2, 0.0};
}

ClosedLoopSde driving_noise_sde() { return {0.0, 0.0, 0.0, 1.0, 0.0}; }

PathEnsemble simulate_exploratory(double x0, const HjbCoefficients& c, const ModelParams& m,
                                  const AmbiguityBounds& b, const AgentParams& agent,
                                  const VolatilityScenario& scenario, const SimConfig& cfg) {
    scenario.validate_against(b);
    const ClosedLoopSde sde = exploratory_closed_loop(c, m, b, agent.lambda);
    const PolicyLine line = policy_line(c, m, b, agent.lambda);
    const double sd = std::sqrt(line.variance);

    PathEnsemble ensemble = materialize(
        sde, x0, scenario, cfg, [&](std::size_t p, std::size_t k, double x) {
            const double xi = rng::standard_normal(cfg.seed, action_stream(p), k);
            return line.slope * x + line.intercept + sd * xi;
        });
    const StabilityCoefficients sc = stability_coefficients(c, m, b, agent.lambda, true);
    ensemble.rho_admissible = check_admissibility(agent.rho, sc).admissible;
    return ensemble;
}

PathEnsemble simulate_classical(double x0, const HjbCoefficients& c, const ModelParams& m,
                                const AmbiguityBounds& b, const VolatilityScenario& scenario,
                                const SimConfig& cfg) {
    scenario.validate_against(b);
    const ClosedLoopSde sde = classical_closed_loop(c, m, b);
    const PolicyLine line = policy_line(c, m, b, 0.0);
    return materialize(sde, x0, scenario, cfg, [&](std::size_t, std::size_t, double x) {
        return line.slope * x + line.intercept;
    });
}

void write_csv(std::ostream& os, const PathEnsemble& ensemble) {
    os << "time,path_id,state,action\n";
    std::string line;
    for (std::size_t p = 0; p < ensemble.states.size(); ++p) {
        for (std::size_t j = 0; j < ensemble.times.size(); ++j) {
            line.clear();
            append_double(line, ensemble.times[j]);
            line.push_back(',');
            line += std::to_string(p);
            line.push_back(',');
            append_double(line, ensemble.states[p][j]);
            line.push_back(',');
            append_double(line, ensemble.actions[p][j]);
            line.push_back('\n');
            os << line;
        }
    }
}

ExpectationBracket estimate_lower_expectation(const PathFunctional& functional,
                                              std::span<const VolatilityScenario> scenarios,
                                              const ClosedLoopSde& sde, double x0,
                                              const AmbiguityBounds& b, const SimConfig& cfg) {
    cfg.validate();
    if (scenarios.empty()) {
        throw InvalidParameter("estimate_lower_expectation: empty scenario set");
    }
    if (scenarios.size() < 2) {
        throw InvalidParameter("estimate_lower_expectation: need at least 2 scenarios");
    }
    const double slack = 1e-12 * b.sigma_upper_sq;
    bool has_lower_extreme = false;
    bool has_upper_extreme = false;
    for (const auto& s : scenarios) {
        s.validate_against(b);
        if (s.is_constant()) {
            const double v = s.sigmas()[0] * s.sigmas()[0];
            has_lower_extreme |= std::abs(v - b.sigma_lower_sq) <= slack;
            has_upper_extreme |= std::abs(v - b.sigma_upper_sq) <= slack;
        }
    }
    if (!has_lower_extreme || !has_upper_extreme) {
        throw InvalidParameter(
            "estimate_lower_expectation: scenario set must include both constant extremes");
    }

    ExpectationBracket bracket;
    bracket.per_scenario.reserve(scenarios.size());
    std::vector<double> values(cfg.n_paths);
    for (std::size_t s = 0; s < scenarios.size(); ++s) {
        for_each_path(sde, x0, scenarios[s], cfg,
                      [&](std::size_t p, std::span<const double> times,
                          std::span<const double> states) { values[p] = functional(times, states); });
        double mean = 0.0;
        for (double v : values) {
            mean += v;
        }
        mean /= static_cast<double>(cfg.n_paths);
        double ss = 0.0;
        for (double v : values) {
            const double d = v - mean;
            ss += d * d;
        }
        const double std_error =
            cfg.n_paths > 1
                ? std::sqrt(ss / static_cast<double>(cfg.n_paths - 1) /
                            static_cast<double>(cfg.n_paths))
                : 0.0;
        bracket.per_scenario.push_back({s, mean, std_error});
    }
    bracket.lower = bracket.per_scenario[0].mean;
    bracket.upper = bracket.per_scenario[0].mean;
    for (const auto& e : bracket.per_scenario) {
        bracket.lower = std::min(bracket.lower, e.mean);
        bracket.upper = std::max(bracket.upper, e.mean);
    }
    return bracket;
}

ExpectationBracket estimate_discounted_reward(double x0, const HjbCoefficients& c,
                                              const ModelParams& m, const AmbiguityBounds& b,
                                              const AgentParams& agent,
                                              std::span<const VolatilityScenario> scenarios,
                                              const SimConfig& cfg) {
    cfg.validate();
    const StabilityCoefficients sc = stability_coefficients(c, m, b, agent.lambda, true);
    const Admissibility adm = check_admissibility(agent.rho, sc);
    if (!adm.admissible) {
        throw SimulationError("estimate_discounted_reward: rho <= alpha (margin " +
                              std::to_string(adm.margin) + ")");
    }
    const double value = exploratory_value(x0, c);
    const double tail = std::exp(-agent.rho * cfg.horizon) *
                        dominating_bound(cfg.horizon, x0, sc);
    if (!(tail < 0.01 * std::abs(value))) {
        throw SimulationError("estimate_discounted_reward: horizon too short, discounted "
                              "tail bound " +
                              std::to_string(tail) + " vs 1% of |value| " +
                              std::to_string(0.01 * std::abs(value)));
    }

    const ClosedLoopSde sde{sc.a1, sc.a2, sc.b1, sc.b2, sc.c1};
    const PolicyLine line = policy_line(c, m, b, agent.lambda);
    const double entropy =
        0.5 * std::log(2.0 * std::numbers::pi * std::numbers::e * line.variance);

    const std::size_t n_steps = cfg.n_steps();
    std::vector<double> discount(n_steps);
    for (std::size_t k = 0; k < n_steps; ++k) {
        discount[k] = std::exp(-agent.rho * cfg.dt * static_cast<double>(k));
    }

    auto functional = [&](std::span<const double>, std::span<const double> states) {
        double acc = 0.0;
        for (std::size_t k = 0; k < n_steps; ++k) {
            const double x = states[k];
            const double mu = line.slope * x + line.intercept;
            const double avg_reward = -(0.5 * m.M * x * x + m.I * x * mu +
                                        0.5 * m.K * (mu * mu + line.variance) + m.P * x +
                                        m.Q * mu);
            acc += discount[k] * (avg_reward + agent.lambda * entropy);
        }
        return acc * cfg.dt;
    };
    return estimate_lower_expectation(functional, scenarios, sde, x0, b, cfg);
}

LlnReport empirical_lln(double x0, const GaussianPolicy& policy, const ModelParams& m,
                        const AmbiguityBounds& b, std::size_t n, double dt,
                        std::uint64_t seed) {
    if (n < 100) {
        throw InvalidParameter("empirical_lln: need at least 100 copies");
    }
    if (!(dt > 0.0)) {
        throw InvalidParameter("empirical_lln: dt must be > 0");
    }
    if (!(policy.variance >= 0.0)) {
        throw InvalidParameter("empirical_lln: negative policy variance");
    }
    const double sd = std::sqrt(policy.variance);
    const double sqdt = std::sqrt(dt);
    const double width = b.sigma_upper_sq - b.sigma_lower_sq;

    std::vector<double> increments(n);
    parallel_for(n, [&](std::size_t i) {
        const double u = policy.mean + sd * rng::standard_normal(seed, action_stream(i), 0);
        const double mult_sq =
            b.sigma_lower_sq +
            width * rng::uniform01(seed, rng::stream_id(rng::kScenarioKind, 0, i), 0);
        const double xi = rng::standard_normal(seed, noise_stream(i), 0);
        increments[i] = drift(x0, u, m) * dt + diffusion(x0, u, m) * std::sqrt(mult_sq) * sqdt * xi;
    });

    auto mean_se = [n](const std::vector<double>& v) {
        double mean = 0.0;
        for (double x : v) {
            mean += x;
        }
        mean /= static_cast<double>(n);
        double ss = 0.0;
        for (double x : v) {
            const double d = x - mean;
            ss += d * d;
        }
        const double se =
            std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n));
        return std::pair<double, double>(mean, se);
    };

    LlnReport report;
    const auto [drift_avg, drift_se] = mean_se(increments);
    report.drift_average = drift_avg;
    report.drift_std_error = drift_se;
    report.drift_target = drift(x0, policy.mean, m) * dt;
    report.drift_pass = std::abs(drift_avg - report.drift_target) <= 4.0 * drift_se;

    std::vector<double> squares(n);
    for (std::size_t i = 0; i < n; ++i) {
        squares[i] = increments[i] * increments[i];
    }
    const auto [sq_avg, sq_se] = mean_se(squares);
    const double second_moment = [&] {
        const double base = diffusion(x0, policy.mean, m);
        return base * base + m.D * m.D * policy.variance;
    }();
    report.sq_average = sq_avg;
    report.sq_std_error = sq_se;
    report.sq_lower = b.sigma_lower_sq * second_moment * dt;
    report.sq_upper = b.sigma_upper_sq * second_moment * dt;
    report.sq_pass = sq_avg >= report.sq_lower - 4.0 * sq_se &&
                     sq_avg <= report.sq_upper + 4.0 * sq_se;
    return report;
}

double sample_action(const GaussianPolicy& policy, rng::Stream& stream) {
    if (!(policy.variance > 0.0)) {
        throw InvalidParameter("sample_action: policy variance must be > 0");
    }
    return policy.mean + std::sqrt(policy.variance) * stream.next_normal();
}

} // namespace exlq

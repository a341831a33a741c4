#pragma once

#include "exlq/lq.hpp"
#include "exlq/model.hpp"
#include "exlq/rng.hpp"
#include "exlq/scenario.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

namespace exlq {

/// Euler-Maruyama configuration. The time grid is uniform with n_steps =
/// round(horizon / dt). store_every thins the recorded grid of a
/// materialized ensemble (the terminal point is always kept); it never
/// changes the computed trajectory or the random draws.
struct SimConfig {
    double dt = 1e-3;
    double horizon = 20.0;
    std::size_t n_paths = 1;
    std::uint64_t seed = 0;
    std::size_t store_every = 1;

    void validate() const;
    std::size_t n_steps() const;
};

/// Affine-in-state closed-loop dynamics shared by every process simulated
/// here: dX = (a1 X + a2) dt + sqrt((b1 X + b2)^2 + c1) dB.
/// c1 > 0 is the randomized-policy diffusion floor; the classical process
/// has c1 = 0. Pure driving noise is a1 = a2 = b1 = 0, b2 = 1, c1 = 0.
struct ClosedLoopSde {
    double a1 = 0.0;
    double a2 = 0.0;
    double b1 = 0.0;
    double b2 = 0.0;
    double c1 = 0.0;

    double drift(double x) const { return a1 * x + a2; }
    double diffusion(double x) const;
};

ClosedLoopSde exploratory_closed_loop(const HjbCoefficients& c, const ModelParams& m,
                                      const AmbiguityBounds& b, double lambda);
ClosedLoopSde classical_closed_loop(const HjbCoefficients& c, const ModelParams& m,
                                    const AmbiguityBounds& b);
ClosedLoopSde driving_noise_sde();

/// Materialized ensemble. states[p][j] is path p at times[j]; actions[p][j]
/// is the action attached to that grid point (a fresh policy sample for the
/// exploratory process, the deterministic feedback for the classical one).
struct PathEnsemble {
    std::vector<double> times;
    std::vector<std::vector<double>> states;
    std::vector<std::vector<double>> actions;
    VolatilityScenario scenario = VolatilityScenario::constant(1.0);
    bool rho_admissible = true; ///< false flags a rho <= alpha configuration
};

/// Simulates the randomized-policy closed loop under one volatility
/// scenario. Deterministic in (cfg.seed, cfg, scenario) regardless of the
/// worker count. Throws SimulationError on state blow-up or an infeasible
/// scenario.
PathEnsemble simulate_exploratory(double x0, const HjbCoefficients& c, const ModelParams& m,
                                  const AmbiguityBounds& b, const AgentParams& agent,
                                  const VolatilityScenario& scenario, const SimConfig& cfg);

/// Classical closed loop under the deterministic feedback control.
PathEnsemble simulate_classical(double x0, const HjbCoefficients& c, const ModelParams& m,
                                const AmbiguityBounds& b, const VolatilityScenario& scenario,
                                const SimConfig& cfg);

/// CSV export: header `time,path_id,state,action`, one row per (path, grid
/// point), shortest-round-trip decimal formatting.
void write_csv(std::ostream& os, const PathEnsemble& ensemble);

/// Functional of one full path; receives the uniform time grid and the
/// states at those times (both of length n_steps + 1).
using PathFunctional =
    std::function<double(std::span<const double> times, std::span<const double> states)>;

struct ScenarioEstimate {
    std::size_t scenario_index = 0;
    double mean = 0.0;
    double std_error = 0.0;
};

/// Monte Carlo bracket of a sublinear expectation over a finite scenario
/// family: lower/upper are the min/max per-scenario means. The family must
/// contain both constant extremes of the ambiguity interval, which are the
/// exact optimizers for sign-definite functionals; with finitely many
/// scenarios the bracket is an inner approximation.
struct ExpectationBracket {
    double lower = 0.0;
    double upper = 0.0;
    std::vector<ScenarioEstimate> per_scenario;
};

ExpectationBracket estimate_lower_expectation(const PathFunctional& functional,
                                              std::span<const VolatilityScenario> scenarios,
                                              const ClosedLoopSde& sde, double x0,
                                              const AmbiguityBounds& b, const SimConfig& cfg);

/// Discounted running objective (density-averaged reward plus weighted
/// entropy) of the randomized policy, estimated per scenario. Requires the
/// admissibility margin rho > alpha and a horizon long enough that the
/// discounted squared-state bound is below 1% of |value(x0)|.
ExpectationBracket estimate_discounted_reward(double x0, const HjbCoefficients& c,
                                              const ModelParams& m, const AmbiguityBounds& b,
                                              const AgentParams& agent,
                                              std::span<const VolatilityScenario> scenarios,
                                              const SimConfig& cfg);

/// One-step law-of-large-numbers interval check: N single-step increments
/// from independent (action, volatility, noise) triples, volatility drawn
/// uniformly from the ambiguity interval. The increment average must fall in
/// the (degenerate) density-averaged drift interval, and the squared-
/// increment average in [lower, upper] x (second moment of sigma) x dt, each
/// widened by 4 standard errors.
struct LlnReport {
    double drift_average = 0.0;
    double drift_target = 0.0; ///< density-averaged drift times dt
    double drift_std_error = 0.0;
    bool drift_pass = false;
    double sq_average = 0.0;
    double sq_lower = 0.0; ///< lower variance x second moment x dt
    double sq_upper = 0.0; ///< upper variance x second moment x dt
    double sq_std_error = 0.0;
    bool sq_pass = false;

    bool pass() const { return drift_pass && sq_pass; }
};

LlnReport empirical_lln(double x0, const GaussianPolicy& policy, const ModelParams& m,
                        const AmbiguityBounds& b, std::size_t n, double dt, std::uint64_t seed);

/// mu + sd * xi with xi standard normal from the stream. Requires
/// policy.variance > 0.
double sample_action(const GaussianPolicy& policy, rng::Stream& stream);

} // namespace exlq

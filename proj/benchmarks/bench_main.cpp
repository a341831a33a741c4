#include "exlq/lq.hpp"
#include "exlq/relaxed.hpp"
#include "exlq/rng.hpp"
#include "exlq/simulation.hpp"
#include "exlq/stats_tests.hpp"

#include <benchmark/benchmark.h>

#include <vector>

namespace {

using namespace exlq;

ModelParams bench_model() { return {-0.2, 0.8, 0.5, 1.2, 10.0, 0.3, 2.0, 0.5, 0.2}; }

void BM_K2Residual(benchmark::State& state) {
    const ModelParams m = bench_model();
    const AmbiguityBounds b(0.01, 1.0);
    double k2 = -0.5;
    for (auto _ : state) {
        benchmark::DoNotOptimize(k2_residual(k2, m, b, 0.3));
        k2 = k2 < -1.0 ? -0.5 : k2 - 1e-9;
    }
}
BENCHMARK(BM_K2Residual);

void BM_SolveHjb(benchmark::State& state) {
    const ModelParams m = bench_model();
    const AmbiguityBounds b(0.01, 1.0);
    const AgentParams agent(0.6, 0.3);
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_hjb(m, b, agent));
    }
}
BENCHMARK(BM_SolveHjb);

void BM_OptimalPolicy(benchmark::State& state) {
    const ModelParams m = bench_model();
    const AmbiguityBounds b(0.01, 1.0);
    const AgentParams agent(0.6, 0.3);
    const HjbCoefficients c = solve_hjb(m, b, agent);
    double x = -5.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(optimal_policy(x, c, m, b, agent.lambda));
        x = x > 5.0 ? -5.0 : x + 1e-6;
    }
}
BENCHMARK(BM_OptimalPolicy);

void BM_BoltzmannPolicy(benchmark::State& state) {
    const ModelParams m = bench_model();
    const AmbiguityBounds b(0.01, 1.0);
    const AgentParams agent(0.6, 0.3);
    const HjbCoefficients c = solve_hjb(m, b, agent);
    const DifferentiableValue v{[&](double y) { return c.k2 * y + c.k1; },
                                [&](double) { return c.k2; }};
    for (auto _ : state) {
        benchmark::DoNotOptimize(boltzmann_policy(1.0, v, m, b, agent.lambda));
    }
}
BENCHMARK(BM_BoltzmannPolicy);

void BM_SimulatePath(benchmark::State& state) {
    const ModelParams m = bench_model();
    const AmbiguityBounds b(0.01, 1.0);
    const AgentParams agent(0.6, 0.3);
    const HjbCoefficients c = solve_hjb(m, b, agent);
    SimConfig cfg;
    cfg.dt = 1e-3;
    cfg.horizon = static_cast<double>(state.range(0)) * 1e-3;
    cfg.n_paths = 1;
    cfg.store_every = cfg.n_steps();
    const VolatilityScenario scenario = VolatilityScenario::constant(1.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            simulate_exploratory(1.0, c, m, b, agent, scenario, cfg));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SimulatePath)->Arg(1000)->Arg(10000);

void BM_NormalDraw(benchmark::State& state) {
    std::uint64_t counter = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(rng::standard_normal(42, 1, counter++));
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_NormalDraw);

void BM_KsTest(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    std::vector<double> samples(n);
    for (std::size_t i = 0; i < n; ++i) {
        samples[i] = rng::standard_normal(7, 0, i);
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(ks_test(samples, 0.0, 1.0));
    }
}
BENCHMARK(BM_KsTest)->Arg(10000);

} // namespace

BENCHMARK_MAIN();

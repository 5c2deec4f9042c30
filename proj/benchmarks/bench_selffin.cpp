#include <benchmark/benchmark.h>

#include "selffin/binomial.hpp"
#include "selffin/funding_pde.hpp"
#include "selffin/hedge_sim.hpp"

namespace {

using namespace selffin;

MarketParams desk() {
    MarketParams m;
    m.volatility = 0.25;
    m.dividend_yield = 0.03;
    m.repo_rate = 0.02;
    m.collateral_rate = 0.01;
    m.funding_rate = 0.04;
    return m;
}

void BM_SolveFundingPde(benchmark::State& state) {
    GridSpec grid;
    grid.s_nodes = grid.t_steps = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_funding_pde(desk(), CollateralPolicy::fraction(0.5), Payoff::call(100), grid));
    }
}
BENCHMARK(BM_SolveFundingPde)->Arg(200)->Arg(400)->Arg(800)->Unit(benchmark::kMillisecond);

void BM_BinomialOracle(benchmark::State& state) {
    const auto steps = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(binomial_oracle(desk(), CollateralPolicy::fraction(0.5), Payoff::put(100), steps));
    }
}
BENCHMARK(BM_BinomialOracle)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_ReplicatePath(benchmark::State& state) {
    const auto sol = solve_funding_pde(desk(), CollateralPolicy::fraction(0.5), Payoff::call(100));
    PathSpec spec;
    spec.market = desk();
    spec.n_steps = 250;
    spec.seed = 1;
    const auto path = simulate_gbm_path(spec, 0);
    const auto mode = static_cast<EngineMode>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(replicate(sol, path, mode));
    state.SetLabel(std::string(to_string(mode)));
}
BENCHMARK(BM_ReplicatePath)->DenseRange(0, 2)->Unit(benchmark::kMicrosecond);

void BM_RunHedge(benchmark::State& state) {
    const auto sol = solve_funding_pde(desk(), CollateralPolicy::fraction(0.5), Payoff::call(100));
    PathSpec spec;
    spec.market = desk();
    spec.n_paths = 1000;
    spec.n_steps = 250;
    spec.seed = 1;
    const auto threads = static_cast<unsigned>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(run_hedge(sol, spec, EngineMode::correct, threads));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(spec.n_paths));
}
BENCHMARK(BM_RunHedge)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace
BENCHMARK_MAIN();

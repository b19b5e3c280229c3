#include <benchmark/benchmark.h>

#include <random>

#include "imc/iteration.hpp"
#include "imc/operators.hpp"
#include "imc/oracle.hpp"

namespace {

using namespace imc;

ImpreciseChain interval_chain(int k, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto uniform = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    ImpreciseChain chain;
    for (int x = 0; x < k; ++x) chain.states.labels.push_back("s" + std::to_string(x));
    for (int x = 0; x < k; ++x) {
        IntervalBoundsRow iv;
        iv.lower.resize(static_cast<std::size_t>(k));
        iv.upper.resize(static_cast<std::size_t>(k));
        for (int y = 0; y < k; ++y) {
            const double center = 1.0 / k;
            const double slack = 0.8 * center * uniform();
            iv.lower[y] = center - slack;
            iv.upper[y] = center + slack;
        }
        chain.rows.push_back(std::move(iv));
    }
    return chain;
}

void BM_LowerTransitionApply(benchmark::State& state) {
    const int k = static_cast<int>(state.range(0));
    ImpreciseChain chain = interval_chain(k, 7);
    ExtVector f;
    std::mt19937_64 rng(11);
    for (int y = 0; y < k; ++y)
        f.push_back(ExtValue(static_cast<double>(rng() >> 11) * 0x1.0p-53));
    for (auto _ : state) {
        benchmark::DoNotOptimize(lower_transition_apply(chain, f));
    }
    state.SetComplexityN(k);
}
BENCHMARK(BM_LowerTransitionApply)->RangeMultiplier(4)->Range(8, 512)->Complexity();

void BM_IterateHittingTime(benchmark::State& state) {
    const int k = static_cast<int>(state.range(0));
    ImpreciseChain chain = interval_chain(k, 23);
    TargetSet target({0}, k);
    for (auto _ : state) {
        benchmark::DoNotOptimize(iterate_hitting_time(chain, target, Bound::upper));
    }
}
BENCHMARK(BM_IterateHittingTime)->Arg(8)->Arg(32)->Arg(128);

void BM_SolveExactUpperTime(benchmark::State& state) {
    const int k = static_cast<int>(state.range(0));
    ImpreciseChain chain = interval_chain(k, 37);
    TargetSet target({0}, k);
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_exact(chain, target, Quantity::time, Bound::upper));
    }
}
BENCHMARK(BM_SolveExactUpperTime)->Arg(8)->Arg(32)->Arg(64);

void BM_BruteForceEnvelope(benchmark::State& state) {
    const int k = static_cast<int>(state.range(0));
    ImpreciseChain chain = random_vertex_chain(5, k);
    TargetSet target({0}, k);
    for (auto _ : state) {
        benchmark::DoNotOptimize(brute_force_envelope(chain, target));
    }
}
BENCHMARK(BM_BruteForceEnvelope)->Arg(3)->Arg(4)->Arg(5);

void BM_MonteCarlo(benchmark::State& state) {
    ImpreciseChain chain = random_vertex_chain(9, 4);
    TargetSet target({0}, 4);
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            monte_carlo_envelope_check(chain, target, 10, state.range(0), 99));
    }
}
BENCHMARK(BM_MonteCarlo)->Arg(1000)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();

#include "rfspec/franck_condon.hpp"

#include <benchmark/benchmark.h>

namespace {

void BM_FcTable(benchmark::State& state) {
    const auto cutoff = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(rfspec::fc_table({0.8, 0.3}, cutoff).entries().data());
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_FcTable)->RangeMultiplier(2)->Range(8, 128)->Complexity(benchmark::oNSquared);

void BM_FcFactorLargeIndex(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(rfspec::fc_factor(400, 380, {2.0, 0.0}));
}
BENCHMARK(BM_FcFactorLargeIndex);

void BM_BlindGammas(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(rfspec::blind_gammas(6, 1, 4.0));
}
BENCHMARK(BM_BlindGammas);

}  // namespace

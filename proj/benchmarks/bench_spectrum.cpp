#include "rfspec/analytic_spectrum.hpp"
#include "rfspec/wigner.hpp"

#include <benchmark/benchmark.h>

namespace {

rfspec::ModelParams params(double gamma) {
    rfspec::ModelParams p;
    p.gamma = gamma;
    p.gamma_pd = p.gamma_xd = p.Gamma_det = 0.05;
    return p;
}

rfspec::Occupations thermal_like(Eigen::Index n) {
    rfspec::Occupations occ(n);
    for (Eigen::Index i = 0; i < n; ++i) occ(i) = std::pow(0.6, static_cast<double>(i));
    return occ / occ.sum();
}

void BM_SpectrumFull(benchmark::State& state) {
    const rfspec::ModelParams p = params(static_cast<double>(state.range(0)) / 10.0);
    const rfspec::Occupations occ = thermal_like(4);
    const auto grid = rfspec::default_grid(p, 3);
    for (auto _ : state) benchmark::DoNotOptimize(rfspec::rf_spectrum_full(p, occ, grid).values.data());
    state.counters["points"] = static_cast<double>(grid.size());
}
BENCHMARK(BM_SpectrumFull)->Arg(5)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_SpectrumNarrow(benchmark::State& state) {
    const rfspec::ModelParams p = params(1.0);
    const rfspec::Occupations occ = thermal_like(4);
    const auto grid = rfspec::default_grid(p, 3);
    for (auto _ : state) benchmark::DoNotOptimize(rfspec::rf_spectrum_narrow(p, occ, grid).values.data());
}
BENCHMARK(BM_SpectrumNarrow)->Unit(benchmark::kMillisecond);

void BM_DecomposeLines(benchmark::State& state) {
    const rfspec::ModelParams p = params(1.0);
    const rfspec::Occupations occ = thermal_like(static_cast<Eigen::Index>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(rfspec::decompose_lines(p, occ).elastic.size());
}
BENCHMARK(BM_DecomposeLines)->Arg(1)->Arg(4)->Arg(16);

void BM_WignerExcited(benchmark::State& state) {
    const rfspec::ModelParams p = params(1.0);
    const std::vector<rfspec::cplx> amps{1.0, 1.0};
    const rfspec::PhononState st = rfspec::fock_superposition_state(amps);
    for (auto _ : state) benchmark::DoNotOptimize(rfspec::wigner_excited(p, st));
}
BENCHMARK(BM_WignerExcited)->Unit(benchmark::kMillisecond);

}  // namespace

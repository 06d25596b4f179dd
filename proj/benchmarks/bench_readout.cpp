#include "rfspec/readout.hpp"

#include <benchmark/benchmark.h>

namespace {

void BM_FitBasis(benchmark::State& state) {
    rfspec::ModelParams p;
    p.gamma = 0.7;
    p.gamma_pd = p.gamma_xd = p.Gamma_det = 0.05;
    const auto n_max = static_cast<std::size_t>(state.range(0));
    const auto model = state.range(1) == 0 ? rfspec::FitModel::narrow : rfspec::FitModel::full;
    rfspec::Occupations truth = rfspec::Occupations::Constant(static_cast<Eigen::Index>(n_max + 1), 1.0);
    truth /= truth.sum();
    const auto grid = rfspec::default_grid(p, n_max);
    const rfspec::Spectrum clean = rfspec::rf_spectrum_full(p, truth, grid);
    const rfspec::Spectrum noisy = rfspec::add_noise(clean, 1.0, 11);
    const Eigen::MatrixXd basis = rfspec::basis_spectra(p, model, n_max, grid);
    for (auto _ : state) benchmark::DoNotOptimize(rfspec::fit_basis(noisy.values, basis, 3).iterations);
}
BENCHMARK(BM_FitBasis)->Args({1, 0})->Args({1, 1})->Args({3, 1})->Unit(benchmark::kMillisecond);

void BM_BasisSpectraFull(benchmark::State& state) {
    rfspec::ModelParams p;
    p.gamma = 0.7;
    p.gamma_pd = p.gamma_xd = p.Gamma_det = 0.05;
    const auto grid = rfspec::default_grid(p, 3);
    for (auto _ : state) benchmark::DoNotOptimize(rfspec::basis_spectra(p, rfspec::FitModel::full, 3, grid).data());
}
BENCHMARK(BM_BasisSpectraFull)->Unit(benchmark::kMillisecond);

}  // namespace

#include "rfspec/lindblad_oracle.hpp"

#include <benchmark/benchmark.h>

namespace {

void BM_GeneratorApply(benchmark::State& state) {
    rfspec::ModelParams p;
    p.gamma = 0.8;
    p.gamma_pd = p.gamma_xd = 0.2;
    const rfspec::TruncatedSystem sys(p, static_cast<std::size_t>(state.range(0)));
    const rfspec::Generator gen(sys);
    const std::vector<rfspec::cplx> amps{1.0, 1.0};
    const Eigen::MatrixXcd rho = sys.ground_state_embedding(rfspec::fock_superposition_state(amps));
    Eigen::MatrixXcd out(rho.rows(), rho.cols());
    for (auto _ : state) {
        gen.apply(rho, out);
        benchmark::DoNotOptimize(out.data());
    }
}
BENCHMARK(BM_GeneratorApply)->Arg(6)->Arg(14)->Arg(30);

void BM_Propagate(benchmark::State& state) {
    rfspec::ModelParams p;
    p.gamma = 0.5;
    p.gamma_pd = p.gamma_xd = 0.05;
    const rfspec::TruncatedSystem sys(p, 12);
    const Eigen::MatrixXcd rho = sys.ground_state_embedding(rfspec::PhononState::from_occupations(rfspec::Occupations::Ones(1)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(rfspec::propagate(sys, rho, 10.0, sys.default_dt()).report.steps);
    }
}
BENCHMARK(BM_Propagate)->Unit(benchmark::kMillisecond);

}  // namespace

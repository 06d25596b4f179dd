#include "rfspec/analytic_spectrum.hpp"
#include "rfspec/errors.hpp"
#include "rfspec/lindblad_oracle.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

using namespace rfspec;

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

PhononState plus_state() {
    const std::vector<cplx> amps{1.0, 1.0};
    return fock_superposition_state(amps);
}

PhononState vacuum_state() { return PhononState::from_occupations(Occupations::Ones(1)); }

Eigen::MatrixXcd random_density(Eigen::Index dim, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    Eigen::MatrixXcd a(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i)
        for (Eigen::Index j = 0; j < dim; ++j) a(i, j) = {nd(rng), nd(rng)};
    Eigen::MatrixXcd rho = a * a.adjoint();
    return rho / rho.trace();
}

Eigen::MatrixXcd annihilation(Eigen::Index n) {
    Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(n, n);
    for (Eigen::Index k = 1; k < n; ++k) b(k - 1, k) = std::sqrt(static_cast<double>(k));
    return b;
}

}  // namespace

TEST(TruncatedSystem, HamiltonianStructure) {
    ModelParams p;
    p.gamma = cplx(0.6, -0.2);
    p.kappa = 0.3;
    const TruncatedSystem sys(p, 8, 0.05);
    const Eigen::MatrixXcd H = sys.hamiltonian();
    EXPECT_LE((H - H.adjoint()).cwiseAbs().maxCoeff(), 1e-15);
    const Eigen::Index n = 9;
    const Eigen::MatrixXcd b = annihilation(n);
    const Eigen::MatrixXcd num = b.adjoint() * b;
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
    const Eigen::MatrixXcd hx = (std::norm(p.gamma) - p.kappa) * id + num + p.gamma * b.adjoint() +
                                std::conj(p.gamma) * b;
    EXPECT_LE((sys.block(H, 1, 1) - hx).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_LE((sys.block(H, 0, 0) - num).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_LE((sys.block(H, 0, 1) - 0.025 * id).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Generator, ClosedSystemIsUnitary) {
    ModelParams p;
    p.gamma = 0.4;
    p.gamma_pd = 0.0;
    p.gamma_xd = 0.0;
    p.kappa = 0.25;
    const TruncatedSystem sys(p, 5, 0.0);
    const Generator gen(sys);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(gen.dense_superoperator(), false);
    EXPECT_LE(es.eigenvalues().real().cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Generator, HamiltonianLevelsAreTwoLadders) {
    ModelParams p;
    p.gamma = 0.5;
    p.kappa = 0.25;
    const TruncatedSystem sys(p, 40, 0.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(sys.block(sys.hamiltonian(), 1, 1));
    for (int n = 0; n < 4; ++n) EXPECT_NEAR(es.eigenvalues()(n), n - p.kappa, 1e-10);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eg(sys.block(sys.hamiltonian(), 0, 0));
    for (int n = 0; n < 4; ++n) EXPECT_NEAR(eg.eigenvalues()(n), n, 1e-12);
}

TEST(Generator, TracelessAndHermitian) {
    ModelParams p;
    p.gamma = cplx(0.7, 0.3);
    p.gamma_pd = 0.15;
    p.gamma_xd = 0.3;
    p.kappa = -0.5;
    const TruncatedSystem sys(p, 6, 0.1);
    const Generator gen(sys);
    for (std::uint64_t s = 0; s < 5; ++s) {
        const Eigen::MatrixXcd rho = random_density(sys.dimension(), s);
        const Eigen::MatrixXcd d = gen.apply(rho);
        EXPECT_LE(std::abs(d.trace()), 1e-12);
        EXPECT_LE((d - d.adjoint()).cwiseAbs().maxCoeff(), 1e-12);
    }
    // superoperator agrees with the matrix action
    const Eigen::MatrixXcd rho = random_density(sys.dimension(), 99);
    const Eigen::VectorXcd v = Eigen::Map<const Eigen::VectorXcd>(rho.data(), rho.size());
    const Eigen::VectorXcd w = gen.dense_superoperator() * v;
    const Eigen::MatrixXcd d = gen.apply(rho);
    EXPECT_LE((w - Eigen::Map<const Eigen::VectorXcd>(d.data(), d.size())).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Propagate, FreeOscillation) {
    ModelParams p;
    p.gamma = 0.9;
    const std::size_t K = 30;
    const TruncatedSystem sys(p, K, 0.0);
    const cplx alpha(1.0, 0.5);
    const Eigen::MatrixXcd rho0 = sys.ground_state_embedding(coherent_state(alpha, K));
    const Trajectory tr = propagate(sys, rho0, 3.0, sys.default_dt(), 100);
    const Eigen::MatrixXcd b = annihilation(static_cast<Eigen::Index>(K + 1));
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
        const cplx mean = (sys.block(tr.states[i], 0, 0) * b).trace();
        const cplx expected = alpha * std::exp(cplx(0.0, -tr.times[i]));
        EXPECT_LE(std::abs(mean - expected), 1e-8) << tr.times[i];
    }
}

TEST(Propagate, TwoLevelStationaryPopulation) {
    ModelParams p;
    p.gamma_pd = 0.1;
    p.gamma_xd = 0.2;
    p.kappa = 0.2;
    const double eps0 = 0.3;
    const TruncatedSystem sys(p, 1, eps0);
    const Trajectory tr = propagate(sys, sys.ground_state_embedding(vacuum_state()),
                                    30.0 / p.gamma_xd, sys.default_dt());
    const double pop = sys.block(tr.states.back(), 1, 1).trace().real();
    const double g1 = p.gamma_xd, g2 = p.coherence_rate(), om2 = eps0 * eps0;
    const double expected = om2 * g2 / (2 * g1) / (p.kappa * p.kappa + g2 * g2 + om2 * g2 / g1);
    EXPECT_NEAR(pop, expected, 1e-6);
}

TEST(Propagate, RefusesCoarseStep) {
    ModelParams p;
    p.gamma = 2.0;
    const TruncatedSystem sys(p, 4);
    const Eigen::MatrixXcd rho0 = sys.ground_state_embedding(vacuum_state());
    try {
        propagate(sys, rho0, 1.0, 3.0 * sys.default_dt());
        FAIL() << "expected refusal";
    } catch (const StepSizeError& e) {
        EXPECT_DOUBLE_EQ(e.suggested(), sys.default_dt());
    }
    EXPECT_NEAR(sys.default_dt(), 0.01 / 4.0, 1e-15);
}

TEST(Correlation, ZeroDelayAndCauchySchwarz) {
    ModelParams p;
    p.gamma = 0.8;
    p.gamma_pd = p.gamma_xd = 0.2;
    const TruncatedSystem sys(p, 10, 0.2);
    const Eigen::MatrixXcd rho0 = sys.ground_state_embedding(plus_state());
    const std::vector<double> taus{0.0, 0.5, 2.0, 4.0};
    const double t = 30.0;
    const auto g = correlation_numeric(sys, rho0, t, taus);
    EXPECT_LE(std::abs(g[0].imag()), 1e-12);
    EXPECT_GE(g[0].real(), 0.0);
    EXPECT_LE(g[0].real(), 1.0);
    for (std::size_t i = 1; i < taus.size(); ++i) {
        const double later = correlation_numeric(sys, rho0, t + taus[i], {0.0})[0].real();
        EXPECT_LE(std::abs(g[i]), std::sqrt(g[0].real() * later) + 1e-12) << taus[i];
    }
}

TEST(Correlation, DecoupledAverageEqualsInstant) {
    ModelParams p;
    p.gamma_pd = 0.1;
    p.gamma_xd = 0.3;
    const TruncatedSystem sys(p, 1, 0.01);
    const Eigen::MatrixXcd rho0 = sys.ground_state_embedding(vacuum_state());
    const std::vector<double> taus{0.0, 1.0, 3.0};
    OracleOptions opts;
    opts.t_stationary = 200.0;  // leaves e^{-c t} of the switch-on below round-off
    const auto avg = time_avg_correlation_numeric(sys, rho0, two_pi, taus, opts);
    const auto inst = correlation_numeric(sys, rho0, opts.t_stationary, taus, opts);
    for (std::size_t i = 0; i < taus.size(); ++i)
        EXPECT_LE(std::abs(avg[i] - inst[i]), 1e-8 * std::abs(inst[0]));
}

TEST(Correlation, WindowDoublingIsStable) {
    ModelParams p;
    p.gamma = 0.8;
    p.gamma_pd = p.gamma_xd = 0.2;
    // weak enough that optical pumping of the phonon populations (order eps0^4)
    // does not drift between the two windows
    const TruncatedSystem sys(p, 12, 2e-4);
    const Eigen::MatrixXcd rho0 = sys.ground_state_embedding(plus_state());
    const std::vector<double> taus{0.0, 1.0, 5.0};
    OracleOptions one, two;
    two.average_periods = 2;
    const auto a = time_avg_correlation_numeric(sys, rho0, two_pi, taus, one);
    const auto b = time_avg_correlation_numeric(sys, rho0, 2 * two_pi, taus, two);
    for (std::size_t i = 0; i < taus.size(); ++i)
        EXPECT_LE(std::abs(a[i] - b[i]), 1e-6 * std::abs(b[0])) << taus[i];
}

TEST(Correlation, TimeAverageMatchesAnalyticEnvelope) {
    ModelParams p;
    p.gamma = 0.8;
    p.gamma_pd = p.gamma_xd = 0.2;
    const TruncatedSystem sys(p, 14, 0.002);
    p.drive_scale = sys.drive_scale();
    const PhononState st = plus_state();
    const std::vector<double> taus{0.0, 1.0, 5.0};
    const auto o = time_avg_correlation_numeric(sys, sys.ground_state_embedding(st), two_pi, taus);
    const double scale = std::abs(avg_correlation(p, st.occupations(), 0.0));
    for (std::size_t i = 0; i < taus.size(); ++i)
        EXPECT_LE(std::abs(o[i] - avg_correlation(p, st.occupations(), taus[i])), 1e-3 * scale)
            << taus[i];
}

TEST(Correlation, DetunedVacuumMatchesAnalytic) {
    ModelParams p;
    p.gamma = 0.8;
    p.gamma_pd = p.gamma_xd = 0.2;
    p.kappa = 0.5;
    const TruncatedSystem sys(p, 14, 0.002);
    p.drive_scale = sys.drive_scale();
    const std::vector<double> taus{0.0, 1.0, 5.0};
    const auto o =
        time_avg_correlation_numeric(sys, sys.ground_state_embedding(vacuum_state()), two_pi, taus);
    const Occupations vac = Occupations::Ones(1);
    for (std::size_t i = 0; i < taus.size(); ++i) {
        const cplx a = avg_correlation(p, vac, taus[i]);
        EXPECT_LE(std::abs(o[i] - a), 1e-3 * std::abs(a)) << taus[i];
    }
}

TEST(SpectrumNumeric, DecoupledLorentzian) {
    ModelParams p;
    p.gamma_xd = 0.2;
    p.Gamma_det = 0.05;
    p.kappa = 0.3;
    const TruncatedSystem sys(p, 1, 0.002);
    const auto grid = uniform_grid(-0.5, 1.0, 0.01);
    const Spectrum s = spectrum_numeric(sys, vacuum_state(), grid);
    EXPECT_EQ(s.provenance, Provenance::oracle);
    const double peak = s.max_value();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double dx = grid[i] - p.kappa;
        const double g2 = p.Gamma_det * p.Gamma_det;
        EXPECT_NEAR(s.values[i] / peak, g2 / (g2 + dx * dx), 1e-3) << grid[i];
    }
}

TEST(SpectrumNumeric, MatchesAnalyticAtPeaks) {
    ModelParams p;
    p.gamma = 0.8;
    p.gamma_pd = p.gamma_xd = 0.2;
    p.Gamma_det = 0.05;
    const TruncatedSystem sys(p, 14, 0.02);
    p.drive_scale = sys.drive_scale();
    const PhononState st = plus_state();
    const auto grid = default_grid(p, 1);
    const Spectrum a = rf_spectrum_full(p, st.occupations(), grid);
    const Spectrum o = spectrum_numeric(sys, st, grid);
    const double am = a.max_value(), om = o.max_value();
    int peaks = 0;
    for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
        if (a.values[i] > a.values[i - 1] && a.values[i] >= a.values[i + 1] && a.values[i] > 0.01 * am) {
            ++peaks;
            EXPECT_NEAR(o.values[i] / om, a.values[i] / am, 0.02) << grid[i];
        }
    }
    EXPECT_GE(peaks, 3);
}

TEST(SpectrumNumeric, WeakDriveScaling) {
    ModelParams p;
    p.gamma = 0.5;
    p.gamma_pd = p.gamma_xd = 0.2;
    p.Gamma_det = 0.2;
    const auto grid = uniform_grid(-2.5, 1.5, 0.05);
    const Spectrum s1 = spectrum_numeric(TruncatedSystem(p, 10, 0.01), plus_state(), grid);
    const Spectrum s2 = spectrum_numeric(TruncatedSystem(p, 10, 0.005), plus_state(), grid);
    const double m = s1.max_value();
    for (std::size_t i = 0; i < grid.size(); ++i)
        EXPECT_NEAR(4.0 * s2.values[i], s1.values[i], 0.01 * m) << grid[i];
}

TEST(SpectrumNumeric, RefusesCoarseQuadrature) {
    ModelParams p;
    p.gamma_xd = 0.2;
    const TruncatedSystem sys(p, 1, 0.002);
    OracleOptions opts;
    opts.dt = sys.max_dt();
    EXPECT_THROW(spectrum_numeric(sys, vacuum_state(), uniform_grid(-40.0, 40.0, 0.5), opts),
                 StepSizeError);
}

TEST(StationaryState, ExcitedBlockMatchesAnalytic) {
    ModelParams p;
    p.gamma = 0.8;
    p.gamma_pd = p.gamma_xd = 0.2;
    p.kappa = 0.5;
    const std::size_t K = 14;
    const TruncatedSystem sys(p, K, 0.002);
    p.drive_scale = sys.drive_scale();
    const double t = two_pi * std::ceil(20.0 / p.gamma_xd / two_pi);
    const Trajectory tr = propagate(sys, sys.ground_state_embedding(plus_state()), t, sys.default_dt());
    const FCTable table(p.gamma, K);
    // lab Fock basis -> displaced basis |n>_X
    const Eigen::MatrixXcd oracle_x = table.entries() * sys.block(tr.states.back(), 1, 1) *
                                      table.entries().adjoint();
    const Eigen::MatrixXcd analytic = excited_state_dm(p, plus_state(), t, K);
    EXPECT_LE((oracle_x - analytic).cwiseAbs().maxCoeff(), 1e-3 * analytic.cwiseAbs().maxCoeff());
}

#include "rfspec/errors.hpp"
#include "rfspec/model.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace rfspec;

TEST(FockSuperposition, EqualWeightsFillTheBlock) {
    const std::vector<cplx> amps{1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)};
    const PhononState s = fock_superposition_state(amps);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) EXPECT_NEAR(std::abs(s.matrix()(i, j) - 0.5), 0.0, 1e-15);
}

TEST(FockSuperposition, SingleAmplitudeIsVacuum) {
    const std::vector<cplx> amps{1.0};
    const PhononState s = fock_superposition_state(amps);
    ASSERT_EQ(s.cutoff(), 0u);
    EXPECT_DOUBLE_EQ(s.matrix()(0, 0).real(), 1.0);
}

TEST(FockSuperposition, FockStateTwo) {
    const std::vector<cplx> amps{0.0, 0.0, 1.0};
    const PhononState s = fock_superposition_state(amps);
    EXPECT_DOUBLE_EQ(s.matrix()(2, 2).real(), 1.0);
    EXPECT_EQ((s.matrix().cwiseAbs().sum()), 1.0);
}

TEST(FockSuperposition, AllZeroRejected) {
    const std::vector<cplx> amps{0.0, 0.0};
    EXPECT_THROW(fock_superposition_state(amps), InvalidInput);
    EXPECT_THROW(fock_superposition_state({}), InvalidInput);
}

TEST(FockSuperposition, RandomAmplitudesAreValidStates) {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> nd;
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<cplx> amps(1 + trial % 9);
        for (auto& a : amps) a = {nd(rng), nd(rng)};
        const PhononState s = fock_superposition_state(amps);
        EXPECT_NEAR(s.matrix().trace().real(), 1.0, 1e-12);
        EXPECT_LE((s.matrix() - s.matrix().adjoint()).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(CoherentOccupations, VacuumAtZeroAmplitude) {
    const Occupations occ = coherent_state_occupations(0.0, 5);
    EXPECT_DOUBLE_EQ(occ(0), 1.0);
    EXPECT_DOUBLE_EQ(occ.tail(5).cwiseAbs().sum(), 0.0);
}

TEST(CoherentOccupations, PoissonGroundWeight) {
    const Occupations occ = coherent_state_occupations(1.0, 20);
    EXPECT_NEAR(occ(0), std::exp(-1.0), 1e-12);
}

TEST(CoherentOccupations, ModeAtMeanFour) {
    const Occupations occ = coherent_state_occupations(2.0, 40);
    // mean 4: P(3) and P(4) tie exactly; direct pmf argmax taken from the top
    std::vector<double> pmf(41);
    for (int i = 0; i <= 40; ++i) pmf[i] = std::exp(-4.0 + i * std::log(4.0) - std::lgamma(i + 1.0));
    int direct = 0;
    for (int i = 0; i <= 40; ++i)
        if (pmf[i] >= pmf[direct] * (1.0 - 1e-12)) direct = i;
    EXPECT_EQ(direct, 4);
    Eigen::Index arg = 0;
    occ.maxCoeff(&arg);
    EXPECT_TRUE(arg == 3 || arg == 4);
    EXPECT_NEAR(occ(4), occ.maxCoeff(), 1e-14);
}

TEST(CoherentOccupations, SumsToOne) {
    for (double a : {0.3, 1.0, 3.0, 7.5}) {
        const cplx alpha(a, 0.4 * a);
        const Occupations occ = coherent_state_occupations(alpha, default_coherent_cutoff(alpha));
        EXPECT_NEAR(occ.sum(), 1.0, 1e-10);
    }
}

TEST(CoherentOccupations, CutoffTooSmallThrows) {
    EXPECT_THROW(coherent_state_occupations(3.0, 5), TruncationError);
}

TEST(CoherentState, MatchesOccupations) {
    const PhononState s = coherent_state(cplx(1.0, 0.5), 30);
    const Occupations occ = coherent_state_occupations(cplx(1.0, 0.5), 30);
    EXPECT_LE((s.occupations() - occ).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(ModelParams, ValidationRules) {
    ModelParams p;
    EXPECT_NO_THROW(p.validate());
    p.gamma_xd = 0.0;
    EXPECT_THROW(p.validate(), InvalidInput);
    p = ModelParams{};
    p.gamma_pd = -0.1;
    EXPECT_THROW(p.validate(), InvalidInput);
    p = ModelParams{};
    p.Gamma_det = 0.0;
    EXPECT_THROW(p.validate(), InvalidInput);
    p = ModelParams{};
    p.drive_scale = 0.0;
    EXPECT_THROW(p.validate(), InvalidInput);
}

TEST(ModelParams, KappaIndex) {
    ModelParams p;
    p.kappa = -2.0;
    EXPECT_EQ(p.kappa_index(), -2);
    p.kappa = 0.5;
    EXPECT_THROW(p.kappa_index(), InvalidInput);
}

TEST(PhononState, RejectsInvalidMatrices) {
    Eigen::MatrixXcd m(2, 2);
    m << 0.5, 0.3, 0.1, 0.5;
    EXPECT_THROW(PhononState{m}, InvalidInput);
    m << 0.6, 0.0, 0.0, 0.6;
    EXPECT_THROW(PhononState{m}, InvalidInput);
    m << 1.5, 0.0, 0.0, -0.5;
    EXPECT_THROW(PhononState{m}, InvalidInput);
}

TEST(Occupations, NormalizationCheck) {
    Occupations occ(2);
    occ << 0.5, 0.6;
    EXPECT_THROW(require_normalized(occ), InvalidInput);
    occ << 1.2, -0.2;
    EXPECT_THROW(require_normalized(occ), InvalidInput);
    occ << 0.25, 0.75;
    EXPECT_NO_THROW(require_normalized(occ));
    EXPECT_EQ(max_occupied_index(occ), 1u);
}

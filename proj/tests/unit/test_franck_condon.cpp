#include "rfspec/errors.hpp"
#include "rfspec/franck_condon.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace rfspec;

TEST(FcFactor, DiagonalGroundState) {
    const cplx g(0.7, -0.4);
    EXPECT_NEAR(std::abs(fc_factor(0, 0, g) - std::exp(-0.5 * std::norm(g))), 0.0, 1e-15);
}

TEST(FcFactor, BlindValues) {
    EXPECT_LE(std::abs(fc_factor(1, 1, 1.0)), 1e-14);
    EXPECT_LE(std::abs(fc_factor(1, 2, std::sqrt(2.0))), 1e-14);
}

TEST(FcFactor, MatchesDenseDisplacement) {
    const cplx g(0.3, 0.2);
    const Eigen::MatrixXcd D = ref::dense_displacement(g, 60);
    EXPECT_LE(std::abs(fc_factor(3, 7, g) - D(3, 7)), 1e-13);
    EXPECT_LE(std::abs(fc_factor(7, 3, g) - D(7, 3)), 1e-13);
}

TEST(FcFactor, LargeIndicesStayFinite) {
    const cplx v = fc_factor(200, 190, cplx(1.2, 0.3));
    EXPECT_TRUE(std::isfinite(v.real()) && std::isfinite(v.imag()));
    EXPECT_GT(std::abs(v), 0.0);
    EXPECT_LE(std::abs(v), 1.0);
}

TEST(FcFactor, ConjugationSymmetry) {
    const cplx g(0.9, -0.6);
    for (std::size_t m = 0; m < 8; ++m)
        for (std::size_t n = 0; n < 8; ++n)
            EXPECT_LE(std::abs(std::conj(fc_factor(m, n, g)) - fc_factor(n, m, -g)), 1e-14);
}

TEST(FcTable, Trivial) {
    const FCTable t = fc_table(0.0, 0);
    EXPECT_EQ(t.entries().rows(), 1);
    EXPECT_EQ(t(0, 0), cplx(1.0, 0.0));
}

TEST(FcTable, ElementwiseConsistency) {
    const FCTable t = fc_table(0.8, 5);
    for (std::size_t m = 0; m <= 5; ++m)
        for (std::size_t n = 0; n <= 5; ++n) EXPECT_EQ(t(m, n), fc_factor(m, n, 0.8));
}

TEST(FcTable, ColumnNormsWhereSupported) {
    // at cutoff 30 the columns n <= 8 of gamma = 1.5 keep all but 1e-8 of their mass
    const FCTable t = fc_table(1.5, 30);
    for (Eigen::Index n = 0; n <= 8; ++n) EXPECT_NEAR(t.entries().col(n).squaredNorm(), 1.0, 1e-8);
}

TEST(FcTable, ColumnNormsUnderPolicy) {
    for (double a : {0.3, 1.0, 1.7}) {
        const std::size_t n_max = 6;
        const auto cutoff = static_cast<std::size_t>(std::ceil(n_max + 10 * a * a + 20));
        const FCTable t = fc_table(cplx(a, 0.2), cutoff);
        for (Eigen::Index n = 0; n <= static_cast<Eigen::Index>(n_max); ++n)
            EXPECT_NEAR(t.entries().col(n).squaredNorm(), 1.0, 1e-8) << "gamma " << a << " col " << n;
    }
}

TEST(FcWeakCoupling, Examples) {
    EXPECT_DOUBLE_EQ(fc_weak_coupling(0, 0, 0.1), 1.0);
    EXPECT_NEAR(fc_weak_coupling(0, 1, 0.1), 0.1, 1e-15);
    EXPECT_NEAR(fc_weak_coupling(1, 3, 0.2), 0.04 / 2.0 * std::sqrt(6.0), 1e-15);
    const double exact = std::abs(fc_factor(1, 3, 0.2));
    EXPECT_NEAR(fc_weak_coupling(1, 3, 0.2) / exact, 1.0, 5 * 0.04);
}

TEST(FcWeakCoupling, ApproachesExact) {
    for (double g : {1e-2, 1e-3}) {
        for (std::size_t m = 0; m <= 4; ++m)
            for (std::size_t n = 0; n <= 4; ++n) {
                const double ratio = fc_weak_coupling(m, n, g) / std::abs(fc_factor(m, n, g));
                EXPECT_LE(std::abs(ratio - 1.0), 5 * g * g) << m << "," << n;
            }
    }
}

// ratio - 1 = g^2 (1/2 + min(m,n) / (|m-n| + 1)) + O(g^4)
TEST(FcWeakCoupling, SecondOrderCoefficient) {
    const double g = 1e-3;
    for (std::size_t m = 0; m < 8; ++m)
        for (std::size_t n = 0; n < 8; ++n) {
            const double lo = static_cast<double>(std::min(m, n));
            const double d = static_cast<double>(std::max(m, n) - std::min(m, n));
            const double ratio = fc_weak_coupling(m, n, g) / std::abs(fc_factor(m, n, g));
            EXPECT_NEAR((ratio - 1.0) / (g * g), 0.5 + lo / (d + 1.0), 1e-3) << m << "," << n;
        }
}

TEST(BlindGammas, Examples) {
    auto r = blind_gammas(1, 0, 3.0);
    ASSERT_EQ(r.size(), 1u);
    EXPECT_NEAR(r[0], 1.0, 1e-10);
    r = blind_gammas(1, 1, 3.0);
    ASSERT_EQ(r.size(), 1u);
    EXPECT_NEAR(r[0], std::sqrt(2.0), 1e-10);
    EXPECT_TRUE(blind_gammas(0, 1, 3.0).empty());
}

TEST(BlindGammas, RootCountMatchesDegree) {
    for (int i = 0; i <= 6; ++i) {
        for (int kappa = -i; kappa <= 3; ++kappa) {
            const auto roots = blind_gammas(i, kappa, 8.0);
            EXPECT_EQ(static_cast<int>(roots.size()), std::min(i + kappa, i)) << i << "," << kappa;
            for (double r : roots) {
                const std::size_t up = static_cast<std::size_t>(i + kappa);
                EXPECT_LE(std::abs(fc_factor(up, static_cast<std::size_t>(i), r)), 1e-9);
            }
        }
    }
}

TEST(BlindGammas, Errors) {
    EXPECT_THROW(blind_gammas(0, -1, 3.0), InvalidTransition);
    EXPECT_THROW(blind_gammas(1, 0, 0.0), InvalidInput);
}

TEST(Laguerre, LowDegrees) {
    EXPECT_DOUBLE_EQ(laguerre(0, 2.0, 1.3), 1.0);
    EXPECT_NEAR(laguerre(1, 2.0, 1.3), 3.0 - 1.3, 1e-15);
    const double x = 0.7, a = 1.0;
    EXPECT_NEAR(laguerre(2, a, x), 0.5 * (x * x - 2 * (a + 2) * x + (a + 1) * (a + 2)), 1e-14);
}

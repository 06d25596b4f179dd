#include "property_checks.hpp"

#include "rfspec/semiclassical.hpp"

#include <gtest/gtest.h>

using namespace rfspec;

TEST(Property, FcUnitarityAndSymmetry) {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const auto r = ref::fc_unitarity_symmetry(seed);
        EXPECT_TRUE(r.ok) << r.detail;
    }
}

TEST(Property, SpectrumNonnegativity) {
    const auto r = ref::spectrum_nonnegativity(11);
    EXPECT_TRUE(r.ok) << r.detail;
}

TEST(Property, DeltaReadIsAMetric) {
    const auto r = ref::delta_read_metric(5);
    EXPECT_TRUE(r.ok) << r.detail;
}

TEST(Property, PropagationKeepsTraceAndHermiticity) {
    const auto r = ref::propagation_invariants(21);
    EXPECT_TRUE(r.ok) << r.detail;
}

TEST(Property, SeededSweepIsDeterministic) {
    const auto r = ref::sweep_determinism(99);
    EXPECT_TRUE(r.ok) << r.detail;
}

TEST(Property, SemiclassicalMirrorSymmetry) {
    for (double D : {0.3, 1.0, 2.5, 4.0})
        for (int kappa : {-2, 0, 1}) {
            const PeakWeights w = semiclassical_weights(D, kappa, -10, 10);
            for (int k = 1; k <= 10; ++k) EXPECT_EQ(w.at(k), w.at(-k));
        }
}

TEST(Property, NoiseDegradesReadoutMonotonically) {
    Occupations occ(2);
    occ << 0.5, 0.5;
    const PhononState st = PhononState::from_occupations(occ);
    ModelParams base;
    base.gamma_pd = base.gamma_xd = base.Gamma_det = 0.05;
    SweepOptions opts;
    opts.model = FitModel::full;
    opts.n_max = 1;
    std::vector<double> gammas;
    for (int i = 0; i <= 34; ++i) gammas.push_back(0.1 + 0.05 * i);
    const auto clean = sweep_gamma(st, base, gammas, NoiseSpec{0.0, 7, 50}, opts);
    const auto one = sweep_gamma(st, base, gammas, NoiseSpec{1.0, 7, 50}, opts);
    const auto five = sweep_gamma(st, base, gammas, NoiseSpec{5.0, 7, 50}, opts);
    for (std::size_t i = 0; i < gammas.size(); ++i) {
        EXPECT_GE(five[i].mean_delta_read + 1e-3, one[i].mean_delta_read) << gammas[i];
        EXPECT_GE(one[i].mean_delta_read + 1e-3, clean[i].mean_delta_read) << gammas[i];
    }
}

#include "lrrw/model.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "reference_values.hpp"

using namespace lrrw;

TEST(ModelParams, ValidationNamesViolatedInvariant) {
    EXPECT_THROW(ModelParams({-0.1, 0.6, 0.5, 0.2}).validate(), std::invalid_argument);
    EXPECT_THROW(ModelParams({0.5, 0.5, 0.3, 0.2}).validate(), std::invalid_argument);
    EXPECT_THROW(ModelParams({0.5, 0.5, 0.0, 1.0}).validate(), std::invalid_argument);
    EXPECT_THROW(ModelParams({0.5, 0.5, 0.0, -0.1}).validate(), std::invalid_argument);
    try {
        ModelParams{0.5, 0.4, 0.3, 0.2}.validate();
        FAIL() << "expected rejection";
    } catch (const std::invalid_argument& e) {
        EXPECT_NE(std::string(e.what()).find("p + q + r = 1"), std::string::npos);
    }
    EXPECT_NO_THROW(ModelParams({0.6, 0.2, 0.2, 0.5}).validate());
}

TEST(ModelParams, RenormalizationIsExplicitOnly) {
    const ModelParams raw{0.6, 0.6, 0.0, 0.3};
    EXPECT_THROW(raw.validate(), std::invalid_argument);
    const ModelParams fixed = raw.renormalized();
    fixed.validate();
    EXPECT_DOUBLE_EQ(fixed.p, 0.5);
    EXPECT_DOUBLE_EQ(fixed.q, 0.5);
}

TEST(DeriveConstants, SymmetricWalk) {
    const auto c = derive_constants({0.5, 0.5, 0.0, 0.5});
    EXPECT_DOUBLE_EQ(c.alpha, 0.0);
    EXPECT_DOUBLE_EQ(c.omega, 0.0);
    EXPECT_DOUBLE_EQ(c.beta, 0.0);
    EXPECT_DOUBLE_EQ(c.tau, 0.5);
    EXPECT_DOUBLE_EQ(c.gamma, 0.5);
    EXPECT_DOUBLE_EQ(c.sigma2, 1.0);
    EXPECT_EQ(c.regime, Regime::Diffusive);
    ASSERT_TRUE(c.ell.has_value());
    EXPECT_DOUBLE_EQ(*c.ell, 1.0);
}

TEST(DeriveConstants, DiffusiveExample) {
    const auto c = derive_constants({0.6, 0.2, 0.2, 0.5});
    EXPECT_NEAR(c.alpha, 0.2, 1e-15);
    EXPECT_NEAR(c.omega, 0.2, 1e-15);
    EXPECT_NEAR(c.beta, 0.4, 1e-15);
    EXPECT_NEAR(c.tau, 0.4, 1e-15);
    EXPECT_NEAR(c.gamma, 0.4, 1e-15);
    EXPECT_NEAR(c.sigma2, 29.0 / 48.0, 1e-15);  // 2/3 - 1/16
    EXPECT_NEAR(c.mu, 0.25, 1e-15);
    EXPECT_EQ(c.regime, Regime::Diffusive);
}

TEST(DeriveConstants, SuperdiffusiveExample) {
    const auto c = derive_constants({0.8, 0.1, 0.1, 0.9});
    EXPECT_NEAR(c.alpha, 0.63, 1e-15);
    EXPECT_NEAR(c.omega, 0.07, 1e-15);
    EXPECT_NEAR(c.tau, 0.09, 1e-15);
    EXPECT_NEAR(c.gamma, 0.81, 1e-15);
    EXPECT_NEAR(c.sigma2, lrrw_ref::kSd_sigma2, 1e-15);
    EXPECT_EQ(c.regime, Regime::Superdiffusive);
    EXPECT_FALSE(c.ell.has_value());
}

TEST(DeriveConstants, AlphaIsExactProduct) {
    const ModelParams p{0.7, 0.05, 0.25, 0.35};
    const auto c = derive_constants(p);
    EXPECT_EQ(c.alpha, p.theta * c.beta);
}

TEST(ClassifyRegime, ThreeWaySplitWithTolerance) {
    EXPECT_EQ(classify_regime(0.2), Regime::Diffusive);
    EXPECT_EQ(classify_regime(0.5), Regime::Critical);
    EXPECT_EQ(classify_regime(0.63), Regime::Superdiffusive);
    EXPECT_EQ(classify_regime(0.5 + 1e-13), Regime::Critical);
    EXPECT_EQ(classify_regime(0.5 - 1e-13), Regime::Critical);
    EXPECT_EQ(classify_regime(0.5 + 1e-11), Regime::Superdiffusive);
    EXPECT_EQ(classify_regime(0.5 - 1e-11), Regime::Diffusive);
}

TEST(DeriveConstants, CriticalVarianceFormsCoincide) {
    // at alpha = 1/2, sigma2 equals tau/(1-gamma) - 4 omega^2
    const ModelParams p{0.8, 0.0, 0.2, 0.625};
    const auto c = derive_constants(p);
    ASSERT_EQ(c.regime, Regime::Critical);
    EXPECT_NEAR(c.sigma2, c.tau / (1.0 - c.gamma) - 4.0 * c.omega * c.omega, 1e-14);
    EXPECT_NEAR(c.clt_variance(), 0.24, 1e-14);
}

TEST(DeriveConstants, Sigma2NonnegativeSweep) {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 2000; ++i) {
        double p = u(rng), q = u(rng), r = u(rng);
        const double sum = p + q + r;
        if (sum <= 0.0) continue;
        const ModelParams mp{p / sum, q / sum, 1.0 - p / sum - q / sum, 0.999 * u(rng)};
        const auto c = derive_constants(mp);
        EXPECT_GE(c.sigma2, 0.0);
        EXPECT_LT(std::abs(c.alpha), 1.0);
        EXPECT_LT(c.gamma, 1.0);
    }
}

TEST(InitialKernel, MatchesFirstStepLaw) {
    const auto k1 = initial_kernel({1.0, 0.0, 0.0, 0.9});
    EXPECT_DOUBLE_EQ(k1.p_plus, 1.0);
    EXPECT_DOUBLE_EQ(k1.p_minus, 0.0);
    EXPECT_DOUBLE_EQ(k1.p_zero, 0.0);
    const auto k2 = initial_kernel({0.6, 0.2, 0.2, 0.5});
    EXPECT_DOUBLE_EQ(k2.p_plus, 0.6);
    EXPECT_DOUBLE_EQ(k2.p_minus, 0.2);
    EXPECT_DOUBLE_EQ(k2.p_zero, 0.2);
    const auto k3 = initial_kernel({0.0, 0.0, 1.0, 0.5});
    EXPECT_DOUBLE_EQ(k3.p_zero, 1.0);
}

TEST(TransitionKernel, NoMemoryReducesToIid) {
    const ModelParams p{0.6, 0.2, 0.2, 0.0};
    for (const WalkState st : {WalkState{5, 1, 3}, WalkState{9, -3, 7}, WalkState{2, 0, 2}}) {
        const auto k = transition_kernel(p, st);
        EXPECT_DOUBLE_EQ(k.p_plus, 0.6);
        EXPECT_DOUBLE_EQ(k.p_minus, 0.2);
        EXPECT_DOUBLE_EQ(k.p_zero, 0.2);
    }
}

TEST(TransitionKernel, HandEnumeratedStates) {
    const ModelParams p{0.6, 0.2, 0.2, 0.5};
    // all past steps +1
    const auto k1 = transition_kernel(p, WalkState{2, 2, 2});
    EXPECT_NEAR(k1.p_plus, 0.6, 1e-15);
    EXPECT_NEAR(k1.p_minus, 0.2, 1e-15);
    EXPECT_NEAR(k1.p_zero, 0.2, 1e-15);
    // all past steps 0
    const auto k2 = transition_kernel(p, WalkState{3, 0, 0});
    EXPECT_NEAR(k2.p_plus, 0.3, 1e-15);
    EXPECT_NEAR(k2.p_minus, 0.1, 1e-15);
    EXPECT_NEAR(k2.p_zero, 0.6, 1e-15);
}

TEST(TransitionKernel, RejectsStepZeroAndInvalidStates) {
    const ModelParams p{0.6, 0.2, 0.2, 0.5};
    EXPECT_THROW(transition_kernel(p, WalkState{0, 0, 0}), std::invalid_argument);
    EXPECT_THROW(transition_kernel(p, WalkState{3, 2, 1}), std::invalid_argument);  // |s| > z
    EXPECT_THROW(transition_kernel(p, WalkState{3, 1, 2}), std::invalid_argument);  // parity
    EXPECT_THROW(transition_kernel(p, WalkState{3, 0, 4}), std::invalid_argument);  // z > n
}

TEST(TransitionKernel, RandomSweepSatisfiesMomentIdentities) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<std::int64_t> nd(1, 400);
    for (int i = 0; i < 10000; ++i) {
        double a = u(rng), b = u(rng), c = u(rng);
        const double sum = a + b + c;
        const ModelParams p{a / sum, b / sum, 1.0 - a / sum - b / sum, 0.999 * u(rng)};
        const auto dc = derive_constants(p);
        const std::int64_t n = nd(rng);
        std::uniform_int_distribution<std::int64_t> zd(0, n);
        const std::int64_t z = zd(rng);
        std::uniform_int_distribution<std::int64_t> jd(0, z);
        const std::int64_t s = 2 * jd(rng) - z;
        const WalkState st{n, s, z};
        const auto k = transition_kernel(p, st);
        EXPECT_GE(k.p_plus, 0.0);
        EXPECT_GE(k.p_minus, 0.0);
        EXPECT_GE(k.p_zero, 0.0);
        EXPECT_NEAR(k.p_plus + k.p_minus + k.p_zero, 1.0, 1e-14);
        const double nn = static_cast<double>(n);
        EXPECT_NEAR(k.p_plus - k.p_minus, dc.omega + dc.alpha * static_cast<double>(s) / nn, 1e-14);
        EXPECT_NEAR(k.p_plus + k.p_minus, dc.tau + dc.gamma * static_cast<double>(z) / nn, 1e-14);
    }
}

TEST(SuperdiffusiveConstants, DegenerateWalkCollapses) {
    // p = 1: S_n = n deterministically, L = 0 a.s., M = theta
    const auto sc = superdiffusive_constants({1.0, 0.0, 0.0, 0.9});
    EXPECT_NEAR(sc.nabla, 0.0, 1e-13);
    EXPECT_NEAR(sc.mean_L, 0.0, 1e-13);
    EXPECT_NEAR(sc.second_moment_L, 0.0, 1e-12);
    EXPECT_NEAR(sc.mean_M, 0.9, 1e-15);
    EXPECT_NEAR(sc.second_moment_M, 0.81, 1e-12);
    // the printed second-moment simplification stays strictly positive here,
    // which is why it is only reported, never used
    EXPECT_GT(sc.second_moment_L_printed, 0.1);
}

TEST(SuperdiffusiveConstants, ReferenceValues) {
    const auto sc = superdiffusive_constants({0.8, 0.1, 0.1, 0.9});
    EXPECT_NEAR(sc.t1, lrrw_ref::kSd_t1, 1e-15);
    EXPECT_NEAR(sc.t2, lrrw_ref::kSd_t2, 1e-14);
    EXPECT_NEAR(sc.nabla, lrrw_ref::kSd_nabla, 1e-13);
    EXPECT_NEAR(sc.mean_M, lrrw_ref::kSd_meanM, 1e-15);
    EXPECT_NEAR(sc.second_moment_M, lrrw_ref::kSd_EM2, 1e-13);
    EXPECT_NEAR(sc.mean_L, lrrw_ref::kSd_meanL, 1e-14);
    EXPECT_NEAR(sc.second_moment_L, lrrw_ref::kSd_EL2, 1e-13);
    EXPECT_NEAR(sc.second_moment_L_printed, lrrw_ref::kSd_EL2print, 1e-13);
}

TEST(SuperdiffusiveConstants, RejectsNonSuperdiffusive) {
    EXPECT_THROW(superdiffusive_constants({0.6, 0.2, 0.2, 0.5}), std::invalid_argument);
    EXPECT_THROW(superdiffusive_constants({0.8, 0.0, 0.2, 0.625}), std::invalid_argument);
}

TEST(WalkState, Invariants) {
    EXPECT_TRUE((WalkState{0, 0, 0}).valid());
    EXPECT_TRUE((WalkState{5, -3, 3}).valid());
    EXPECT_FALSE((WalkState{0, 1, 1}).valid());
    EXPECT_FALSE((WalkState{4, 3, 2}).valid());
    EXPECT_FALSE((WalkState{4, 2, 3}).valid());
    EXPECT_FALSE((WalkState{2, 0, 3}).valid());
}

#include "lrrw/exact.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

using namespace lrrw;

namespace {

const std::vector<ModelParams> kSweep = {
    {0.6, 0.2, 0.2, 0.5},      // diffusive
    {0.5, 0.5, 0.0, 0.5},      // symmetric
    {0.6, 0.2, 0.2, 0.0},      // no memory
    {0.8, 0.0, 0.2, 0.625},    // critical
    {0.8, 0.1, 0.1, 0.9},      // superdiffusive
    {0.75, 0.05, 0.2, 0.8},    // superdiffusive
    {0.0, 0.0, 1.0, 0.3},      // frozen walk
    {1.0, 0.0, 0.0, 0.9},      // deterministic walk
};

double rel_gap(double a, double b) {
    return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

TEST(EvolveExact, FirstLevelIsInitialLaw) {
    const ModelParams p{0.6, 0.2, 0.2, 0.5};
    const auto d = evolve_exact(p, 1);
    EXPECT_DOUBLE_EQ(d.prob(1, 1), 0.6);
    EXPECT_DOUBLE_EQ(d.prob(-1, 1), 0.2);
    EXPECT_DOUBLE_EQ(d.prob(0, 0), 0.2);
    EXPECT_DOUBLE_EQ(d.prob(0, 1), 0.0);
}

TEST(EvolveExact, NoMemoryLevelTwoIsTrinomialConvolution) {
    const ModelParams p{0.6, 0.2, 0.2, 0.0};
    const auto d = evolve_exact(p, 2);
    EXPECT_NEAR(d.prob(2, 2), 0.36, 1e-15);
    EXPECT_NEAR(d.prob(-2, 2), 0.04, 1e-15);
    EXPECT_NEAR(d.prob(0, 2), 2 * 0.6 * 0.2, 1e-15);
    EXPECT_NEAR(d.prob(1, 1), 2 * 0.6 * 0.2, 1e-15);
    EXPECT_NEAR(d.prob(-1, 1), 2 * 0.2 * 0.2, 1e-15);
    EXPECT_NEAR(d.prob(0, 0), 0.04, 1e-15);
}

TEST(EvolveExact, MassConservationAndSupport) {
    for (const auto& p : kSweep) {
        const auto d = evolve_exact(p, 80);
        EXPECT_NEAR(d.total_mass(), 1.0, 1e-12);
        d.for_each([&](std::int64_t s, std::int64_t z, double mass) {
            EXPECT_GE(mass, 0.0);
            EXPECT_LE(std::abs(s), z);
            EXPECT_LE(z, 80);
            EXPECT_EQ(((s ^ z) & 1), 0);
        });
    }
}

TEST(EvolveExact, CapRejectionMentionsTheCap) {
    try {
        evolve_exact({0.6, 0.2, 0.2, 0.5}, 501);
        FAIL() << "expected cap rejection";
    } catch (const std::invalid_argument& e) {
        EXPECT_NE(std::string(e.what()).find("cap"), std::string::npos);
    }
    EXPECT_NO_THROW(evolve_exact({0.6, 0.2, 0.2, 0.5}, 30, 30));
}

TEST(ClosedForms, SmallHorizonAnchors) {
    const ModelParams p{0.6, 0.2, 0.2, 0.5};
    const auto dc = derive_constants(p);
    const auto t = build_tables(dc.alpha, dc.gamma, 64);
    EXPECT_NEAR(closed_form_ES(1, dc, t), dc.beta, 1e-15);
    EXPECT_NEAR(closed_form_EZ(1, p, t), 0.8, 1e-15);
    EXPECT_NEAR(closed_form_ES2(1, p, dc, t), 0.8, 1e-15);
}

TEST(ClosedForms, NoMemoryReduction) {
    const ModelParams p{0.6, 0.2, 0.2, 0.0};
    const auto dc = derive_constants(p);
    const auto t = build_tables(dc.alpha, dc.gamma, 64);
    for (const std::int64_t n : {1L, 7L, 64L}) {
        EXPECT_NEAR(closed_form_ES(n, dc, t), static_cast<double>(n) * 0.4, 1e-12);
        EXPECT_NEAR(closed_form_EZ(n, p, t), static_cast<double>(n) * 0.8, 1e-12);
    }
}

TEST(ClosedForms, FrozenWalkIsAllZeros) {
    const ModelParams p{0.0, 0.0, 1.0, 0.3};
    const auto dc = derive_constants(p);
    const auto t = build_tables(dc.alpha, dc.gamma, 32);
    const auto d = evolve_exact(p, 32);
    EXPECT_DOUBLE_EQ(d.prob(0, 0), 1.0);
    EXPECT_DOUBLE_EQ(closed_form_ES(32, dc, t), 0.0);
    EXPECT_DOUBLE_EQ(closed_form_ES2(32, p, dc, t), 0.0);
}

TEST(ClosedForms, AgreeWithOracleAcrossSweep) {
    for (const auto& p : kSweep) {
        const auto dc = derive_constants(p);
        const auto t = build_tables(dc.alpha, dc.gamma, 100);
        for (const std::int64_t n : {10L, 60L, 100L}) {
            const auto d = evolve_exact(p, n);
            const auto m = exact_moments(d, t, dc);
            EXPECT_LT(rel_gap(m.es, closed_form_ES(n, dc, t)), 1e-12);
            EXPECT_LT(rel_gap(m.ez, closed_form_EZ(n, p, t)), 1e-12);
            EXPECT_LT(rel_gap(m.es2, closed_form_ES2(n, p, dc, t)), 1e-10);
            EXPECT_NEAR(m.em, dc.beta - dc.omega, 1e-12);
        }
    }
}

TEST(ClosedForms, SecondMomentRecursionAtHighReinforcement) {
    const ModelParams p{0.8, 0.1, 0.1, 0.9};
    const auto dc = derive_constants(p);
    const auto t = build_tables(dc.alpha, dc.gamma, 100);
    const auto d = evolve_exact(p, 100);
    const auto m = exact_moments(d, t, dc);
    EXPECT_LT(rel_gap(m.es2, closed_form_ES2(100, p, dc, t)), 1e-10);
}

TEST(ClosedFormEM2, MatchesOracleInSuperdiffusiveSweep) {
    for (const auto& p : {ModelParams{0.8, 0.1, 0.1, 0.9}, ModelParams{0.75, 0.05, 0.2, 0.8},
                          ModelParams{0.95, 0.0, 0.05, 0.9}, ModelParams{0.97, 0.01, 0.02, 0.9375}}) {
        const auto dc = derive_constants(p);
        const auto sc = superdiffusive_constants(p);
        const auto t = build_tables(dc.alpha, dc.gamma, 200);
        for (const std::int64_t n : {5L, 50L, 200L}) {
            const auto d = evolve_exact(p, n);
            const auto m = exact_moments(d, t, dc);
            const double chain = closed_form_EM2(n, p, dc, sc, t);
            EXPECT_LT(std::abs(chain - m.em2) / std::abs(m.em2), 1e-8)
                << "p=" << p.p << " n=" << n;
        }
    }
}

TEST(ClosedFormEM2, MonotoneSecondMomentInN) {
    const ModelParams p{0.8, 0.1, 0.1, 0.9};
    const auto dc = derive_constants(p);
    const auto sc = superdiffusive_constants(p);
    const auto t = build_tables(dc.alpha, dc.gamma, 120);
    double prev = 0.0;
    for (std::int64_t n = 1; n <= 120; ++n) {
        const double em2 = closed_form_EM2(n, p, dc, sc, t);
        EXPECT_GE(em2, prev - 1e-12);
        prev = em2;
    }
}

TEST(ClosedFormEM2, RejectsDiffusiveInput) {
    const ModelParams p{0.8, 0.1, 0.1, 0.9};
    const auto sc = superdiffusive_constants(p);
    const ModelParams pd{0.6, 0.2, 0.2, 0.5};
    const auto dcd = derive_constants(pd);
    const auto t = build_tables(dcd.alpha, dcd.gamma, 10);
    EXPECT_THROW(closed_form_EM2(5, pd, dcd, sc, t), std::invalid_argument);
}

TEST(MartingaleProperty, ZeroViolationsAcrossSweep) {
    for (const auto& p : kSweep) {
        const auto rep = martingale_property_check(p, 60);
        EXPECT_EQ(rep.violations, 0) << "p=" << p.p << " q=" << p.q << " theta=" << p.theta
                                     << " max dM err " << rep.max_martingale_error;
        EXPECT_GT(rep.states_checked, 0);
    }
}

TEST(MartingaleProperty, ConditionalVarianceByHand) {
    // state (n=4, s=2, z=2) under (0.6, 0.2, 0.2, 0.5):
    // gamma z/n + tau - (alpha s/n + omega)^2 = 0.2 + 0.4 - 0.09 = 0.51
    const ModelParams p{0.6, 0.2, 0.2, 0.5};
    const auto k = transition_kernel(p, WalkState{4, 2, 2});
    const double drift = k.p_plus - k.p_minus;
    const double cm = 0.2 * 2.0 / 4.0 + 0.2;
    const double xi_var = k.p_plus + k.p_minus - 2.0 * cm * drift + cm * cm;
    EXPECT_NEAR(xi_var, 0.51, 1e-15);
}

TEST(MartingaleProperty, FourthMomentBound) {
    // E[xi^4 | state] <= 16 over every reachable state
    for (const auto& p : {ModelParams{0.6, 0.2, 0.2, 0.5}, ModelParams{0.8, 0.1, 0.1, 0.9}}) {
        const auto dc = derive_constants(p);
        for (std::int64_t n = 1; n <= 40; ++n) {
            for (std::int64_t z = 0; z <= n; ++z) {
                for (std::int64_t s = -z; s <= z; s += 2) {
                    const auto k = transition_kernel(p, WalkState{n, s, z});
                    const double cm = dc.alpha * static_cast<double>(s) / static_cast<double>(n)
                                    + dc.omega;
                    const double e4 = k.p_plus * std::pow(1.0 - cm, 4)
                                    + k.p_minus * std::pow(-1.0 - cm, 4)
                                    + k.p_zero * std::pow(-cm, 4);
                    EXPECT_LE(e4, 16.0);
                }
            }
        }
    }
}

TEST(MartingaleProperty, RejectsOversizedHorizon) {
    EXPECT_THROW(martingale_property_check({0.6, 0.2, 0.2, 0.5}, kOracleCap + 1),
                 std::invalid_argument);
}

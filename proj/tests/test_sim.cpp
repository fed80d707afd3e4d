#include "lrrw/simulate.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

#include "lrrw/exact.hpp"
#include "lrrw/stats.hpp"

using namespace lrrw;

namespace {

SimConfig base_config(const ModelParams& p, std::int64_t horizon, std::int64_t paths,
                      std::uint64_t seed = 11) {
    SimConfig c;
    c.params = p;
    c.horizon = horizon;
    c.checkpoints = {horizon};
    c.num_paths = paths;
    c.master_seed = seed;
    return c;
}

}  // namespace

TEST(SimConfig, Validation) {
    SimConfig c = base_config({0.6, 0.2, 0.2, 0.5}, 100, 4);
    EXPECT_NO_THROW(c.validate());
    c.checkpoints = {50, 20};
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c.checkpoints = {20, 20};
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c.checkpoints = {101};
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c.checkpoints = {100};
    c.acc.qsl_orders = {4};
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c.acc.qsl_orders = {1};
    c.acc.lil = true;
    c.acc.lil_n0 = 50;
    EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(Step, DeterministicWalkIsStraightLine) {
    const ModelParams p{1.0, 0.0, 0.0, 0.7};
    for (const SamplerKind s : {SamplerKind::Kernel, SamplerKind::Latent}) {
        WalkState st;
        PathRng rng(1, 0);
        for (int k = 0; k < 200; ++k) EXPECT_EQ(step(st, p, s, rng), 1);
        EXPECT_EQ(st.s, 200);
        EXPECT_EQ(st.z, 200);
    }
}

TEST(Step, StateInvariantsAlongPaths) {
    const ModelParams p{0.6, 0.2, 0.2, 0.5};
    for (const SamplerKind s : {SamplerKind::Kernel, SamplerKind::Latent}) {
        WalkState st;
        PathRng rng(3, 5);
        for (int k = 0; k < 5000; ++k) {
            step(st, p, s, rng);
            ASSERT_TRUE(st.valid());
        }
    }
}

TEST(Step, NoMemoryMatchesIidMean) {
    const ModelParams p{0.6, 0.2, 0.2, 0.0};
    SimConfig c = base_config(p, 100, 20000);
    const auto ens = simulate_ensemble(c);
    std::vector<double> ends;
    for (const auto& path : ens.paths)
        ends.push_back(static_cast<double>(path.checkpoints.back().s) / 100.0);
    const auto est = mc_mean(ends);
    EXPECT_NEAR(est.value, 0.4, 3.5 * est.stderr_);
}

TEST(SimulatePath, MartingaleRecomputationMatchesIncrementalSum) {
    const ModelParams p{0.6, 0.2, 0.2, 0.5};
    SimConfig c = base_config(p, 100000, 1);
    const auto dc = derive_constants(p);
    const auto tables = build_tables(dc.alpha, dc.gamma, c.horizon);
    const auto obs = simulate_path(c, tables, 0);
    const auto& rec = obs.checkpoints.back();
    // two independent computations of M_n: a_n S_n - omega A_n vs sum a_k xi_k
    EXPECT_NEAR(rec.martingale, rec.martingale_incr, 1e-8);
}

TEST(SimulatePath, QuadraticVariationBound) {
    // <M>_n <= (gamma + tau) v_n throughout
    const ModelParams p{0.8, 0.0, 0.2, 0.625};
    SimConfig c = base_config(p, 20000, 3);
    c.checkpoints = {10, 100, 1000, 20000};
    const auto dc = derive_constants(p);
    const auto tables = build_tables(dc.alpha, dc.gamma, c.horizon);
    for (std::int64_t i = 0; i < c.num_paths; ++i) {
        const auto obs = simulate_path(c, tables, i);
        for (const auto& rec : obs.checkpoints) {
            EXPECT_LE(rec.quad_variation,
                      (dc.gamma + dc.tau) * tables.v[static_cast<std::size_t>(rec.n)] + 1e-12);
            EXPECT_GE(rec.quad_variation, 0.0);
        }
    }
}

TEST(SimulatePath, BoundedIncrements) {
    const ModelParams p{0.8, 0.1, 0.1, 0.9};
    const auto dc = derive_constants(p);
    SimConfig c = base_config(p, 50000, 4);
    const auto ens = simulate_ensemble(c);
    for (const auto& path : ens.paths) {
        EXPECT_LE(path.max_abs_xi, 2.0 + std::abs(dc.alpha));
        EXPECT_LE(std::pow(path.max_abs_xi, 4), 16.0 + 1e-9);
    }
}

TEST(SimulatePath, FrozenWalkAccumulatorsVanish) {
    const ModelParams p{0.0, 0.0, 1.0, 0.5};
    SimConfig c = base_config(p, 5000, 2);
    c.acc.qsl_orders = {1, 2};
    c.acc.asclt_grid = {0.5};
    const auto ens = simulate_ensemble(c);
    for (const auto& path : ens.paths) {
        const auto& rec = path.checkpoints.back();
        EXPECT_EQ(rec.s, 0);
        EXPECT_EQ(rec.z, 0);
        EXPECT_DOUBLE_EQ(rec.qsl[0], 0.0);
        EXPECT_DOUBLE_EQ(rec.qsl[1], 0.0);
        // deviations are identically zero, so all indicator mass sits at u = 0 <= 0.5
        EXPECT_DOUBLE_EQ(rec.asclt_mass[0], rec.asclt_weight);
    }
}

TEST(RunEnsemble, WorkerCountInvariance) {
    const ModelParams p{0.6, 0.2, 0.2, 0.5};
    SimConfig c = base_config(p, 2000, 64, 99);
    c.checkpoints = {100, 2000};
    c.acc.qsl_orders = {1};
    c.acc.asclt_grid = {-1.0, 0.0, 1.0};
    c.acc.lil = true;
    const auto dc = derive_constants(p);
    const auto tables = build_tables(dc.alpha, dc.gamma, c.horizon);

    c.num_workers = 1;
    const auto one = run_ensemble(c, tables);
    c.num_workers = 8;
    const auto eight = run_ensemble(c, tables);
    c.num_workers = 3;
    const auto three = run_ensemble(c, tables);
    ASSERT_EQ(one.size(), eight.size());
    for (std::size_t i = 0; i < one.size(); ++i) {
        EXPECT_TRUE(identical(one[i], eight[i]));
        EXPECT_TRUE(identical(one[i], three[i]));
    }
}

TEST(RunEnsemble, SinglePathEqualsSimulatePath) {
    const ModelParams p{0.8, 0.1, 0.1, 0.9};
    SimConfig c = base_config(p, 3000, 5, 7);
    const auto dc = derive_constants(p);
    const auto tables = build_tables(dc.alpha, dc.gamma, c.horizon);
    const auto ens = run_ensemble(c, tables);
    for (std::int64_t i = 0; i < 5; ++i)
        EXPECT_TRUE(identical(ens[static_cast<std::size_t>(i)], simulate_path(c, tables, i)));
}

TEST(RunEnsemble, SamplersAgreeWithExactLawAtSmallHorizon) {
    // joint (s, z) law at n = 5 against the exact distribution, both samplers
    const ModelParams p{0.6, 0.2, 0.2, 0.5};
    const auto exact = evolve_exact(p, 5);
    std::vector<double> probs;
    std::vector<std::pair<std::int64_t, std::int64_t>> support;
    exact.for_each([&](std::int64_t s, std::int64_t z, double mass) {
        if (mass > 0.0) {
            support.emplace_back(s, z);
            probs.push_back(mass);
        }
    });
    for (const SamplerKind sk : {SamplerKind::Kernel, SamplerKind::Latent}) {
        SimConfig c = base_config(p, 5, 100000, 2024);
        c.sampler = sk;
        const auto ens = simulate_ensemble(c);
        std::vector<std::int64_t> counts(support.size(), 0);
        for (const auto& path : ens.paths) {
            const auto& rec = path.checkpoints.back();
            for (std::size_t j = 0; j < support.size(); ++j)
                if (support[j].first == rec.s && support[j].second == rec.z) {
                    ++counts[j];
                    break;
                }
        }
        const auto res = chi_square_gof(counts, probs);
        EXPECT_GT(res.p_value, 0.001) << to_string(sk);
    }
}

TEST(RunEnsemble, LWindowStoresScaledDeviations) {
    const ModelParams p{0.8, 0.1, 0.1, 0.9};
    const auto dc = derive_constants(p);
    SimConfig c = base_config(p, 4000, 2);
    c.acc.l_window_lo = 100;
    c.acc.l_window_hi = 120;
    c.checkpoints = {100, 4000};
    const auto tables = build_tables(dc.alpha, dc.gamma, c.horizon);
    const auto obs = simulate_path(c, tables, 0);
    ASSERT_EQ(obs.l_window.size(), 21u);
    const auto& at100 = obs.checkpoints.front();
    const double expected = std::pow(100.0, 1.0 - dc.alpha)
                          * (static_cast<double>(at100.s) / 100.0 - dc.mu);
    EXPECT_DOUBLE_EQ(obs.l_window[0], expected);
}

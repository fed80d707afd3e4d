// Path generation at scale: single-step samplers (latent and kernel forms),
// checkpointed paths with online accumulators, and a deterministic parallel
// ensemble driver.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lrrw/model.hpp"
#include "lrrw/rng.hpp"
#include "lrrw/sequences.hpp"

namespace lrrw {

enum class SamplerKind { Latent, Kernel };

std::string to_string(SamplerKind s);
SamplerKind sampler_from_string(const std::string& name);

/// Online statistics maintained along each path. Sums that the limit
/// theorems normalize by log n (or log log n) are accumulated with
/// compensated summation.
struct AccumulatorConfig {
    /// Orders r of the even-moment sums; subset of {1, 2, 3}. Diffusive
    /// paths accumulate k^{r-1} dev^{2r}; critical paths accumulate
    /// k^{r-1} (log k)^{-(r+1)} dev^{2r} starting at k = 2.
    std::vector<int> qsl_orders;
    /// Evaluation points of the log-weighted empirical CDF.
    std::vector<double> asclt_grid;
    /// Running max of the regime LIL statistic over [lil_n0, horizon].
    bool lil = false;
    std::int64_t lil_n0 = 100;
    /// Superdiffusive only: store l_k = k^{1-alpha}(S_k/k - mu) for k in
    /// [l_window_lo, l_window_hi] (fluctuation LIL support). 0/0 disables.
    std::int64_t l_window_lo = 0;
    std::int64_t l_window_hi = 0;

    bool any() const {
        return !qsl_orders.empty() || !asclt_grid.empty() || lil || l_window_hi > 0;
    }
};

struct SimConfig {
    ModelParams params;
    std::int64_t horizon = 0;
    std::vector<std::int64_t> checkpoints;  // sorted, unique, within [1, horizon]
    std::int64_t num_paths = 1;
    std::uint64_t master_seed = 1;
    SamplerKind sampler = SamplerKind::Kernel;
    AccumulatorConfig acc;
    unsigned num_workers = 0;  // 0 -> hardware concurrency

    void validate() const;
};

/// Snapshot at a checkpoint time n. The martingale value is recomputed from
/// the tables (a_n S_n - omega A_n); martingale_incr carries the running
/// compensated sum of a_k xi_k, and quad_variation the running sum of
/// a_k^2 E[xi_k^2 | F_{k-1}].
struct CheckpointRecord {
    std::int64_t n = 0;
    std::int64_t s = 0;
    std::int64_t z = 0;
    double martingale = 0.0;
    double martingale_incr = 0.0;
    double quad_variation = 0.0;
    std::vector<double> qsl;         // one raw sum per configured order
    std::vector<double> asclt_mass;  // one weighted count per grid point
    double asclt_weight = 0.0;
    double lil_sup = 0.0;
};

struct PathObservation {
    std::int64_t path_index = 0;
    std::vector<CheckpointRecord> checkpoints;
    double l_proxy = 0.0;           // horizon^{1-alpha} (S/horizon - mu)
    std::vector<double> l_window;   // l_k over [l_window_lo, l_window_hi]
    double max_abs_xi = 0.0;
};

/// Bitwise equality of every recorded field; used by determinism checks.
bool identical(const PathObservation& a, const PathObservation& b);

/// Advances the state by one step and returns the increment in {-1, 0, +1}.
/// Latent mode draws Y ~ Bernoulli(theta), the move mark ~ (p, q, r), and --
/// when recalling -- the past step type from the counts (N+, N-, N0), which
/// matches uniform past indexing in distribution. Kernel mode samples the
/// marginal kernel directly. The first step (n = 0) uses the initial kernel
/// in both modes.
int step(WalkState& state, const ModelParams& params, SamplerKind sampler, PathRng& rng);

/// Walks one path to config.horizon. The same (master_seed, path_index,
/// sampler) always produces the same observation.
PathObservation simulate_path(const SimConfig& config, const SequenceTables& tables,
                              std::int64_t path_index);

/// Embarrassingly parallel ensemble; per-path substreams are derived from
/// (master_seed, path_index), results are keyed by path index, so any worker
/// count yields identical output.
std::vector<PathObservation> run_ensemble(const SimConfig& config, const SequenceTables& tables);

/// Ensemble bundled with its provenance.
struct Ensemble {
    SimConfig config;
    DerivedConstants constants;
    std::vector<PathObservation> paths;
};

/// Builds tables for the config horizon, runs the ensemble and bundles it.
Ensemble simulate_ensemble(const SimConfig& config);

}  // namespace lrrw

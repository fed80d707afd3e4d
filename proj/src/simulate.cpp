#include "lrrw/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstring>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace lrrw {
namespace {

struct NeumaierSum {
    double sum = 0.0;
    double comp = 0.0;

    void add(double x) {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
    }
    double value() const { return sum + comp; }
};

inline int draw_mark(const ModelParams& p, double u) {
    if (u < p.p) return 1;
    if (u < p.p + p.q) return -1;
    return 0;
}

}  // namespace

std::string to_string(SamplerKind s) { return s == SamplerKind::Latent ? "latent" : "kernel"; }

SamplerKind sampler_from_string(const std::string& name) {
    if (name == "latent") return SamplerKind::Latent;
    if (name == "kernel") return SamplerKind::Kernel;
    throw std::invalid_argument("unknown sampler '" + name + "' (expected latent|kernel)");
}

void SimConfig::validate() const {
    params.validate();
    if (horizon < 1) throw std::invalid_argument("SimConfig: horizon >= 1 required");
    if (num_paths < 1) throw std::invalid_argument("SimConfig: num_paths >= 1 required");
    if (!std::is_sorted(checkpoints.begin(), checkpoints.end()))
        throw std::invalid_argument("SimConfig: checkpoints must be sorted");
    if (std::adjacent_find(checkpoints.begin(), checkpoints.end()) != checkpoints.end())
        throw std::invalid_argument("SimConfig: checkpoints must be unique");
    for (std::int64_t c : checkpoints)
        if (c < 1 || c > horizon)
            throw std::invalid_argument("SimConfig: checkpoint " + std::to_string(c)
                                        + " outside [1, horizon]");
    for (int r : acc.qsl_orders)
        if (r < 1 || r > 3)
            throw std::invalid_argument("SimConfig: QSL orders must lie in {1,2,3}");
    if (acc.lil && acc.lil_n0 < 100)
        throw std::invalid_argument("SimConfig: lil_n0 >= 100 required (log log n too unstable below)");
    if (acc.l_window_hi > 0) {
        if (acc.l_window_lo < 1 || acc.l_window_lo > acc.l_window_hi || acc.l_window_hi > horizon)
            throw std::invalid_argument("SimConfig: invalid l_window range");
    }
}

int step(WalkState& state, const ModelParams& params, SamplerKind sampler, PathRng& rng) {
    int x;
    if (state.n == 0) {
        x = draw_mark(params, rng.u01());
    } else if (sampler == SamplerKind::Kernel) {
        const StepKernel k = transition_kernel(params, state);
        const double u = rng.u01();
        x = u < k.p_plus ? 1 : (u < k.p_plus + k.p_minus ? -1 : 0);
    } else {
        const bool recall = rng.u01() < params.theta;
        const int mark = draw_mark(params, rng.u01());
        if (recall) {
            // past step type from the counts; distributionally identical to
            // drawing a uniform past index
            const double u = rng.u01() * static_cast<double>(state.n);
            const double nplus = static_cast<double>(state.z + state.s) / 2.0;
            const double nminus = static_cast<double>(state.z - state.s) / 2.0;
            const int past = u < nplus ? 1 : (u < nplus + nminus ? -1 : 0);
            x = mark * past;
        } else {
            x = mark;
        }
    }
    state.s += x;
    state.z += x == 0 ? 0 : 1;
    state.n += 1;
    return x;
}

PathObservation simulate_path(const SimConfig& config, const SequenceTables& tables,
                              std::int64_t path_index) {
    if (tables.horizon < config.horizon)
        throw std::invalid_argument("simulate_path: tables shorter than the horizon");

    const ModelParams& params = config.params;
    const DerivedConstants dc = derive_constants(params);
    const bool critical_weights = dc.regime == Regime::Critical;

    PathRng rng(config.master_seed, static_cast<std::uint64_t>(path_index));
    PathObservation obs;
    obs.path_index = path_index;
    obs.checkpoints.reserve(config.checkpoints.size());

    const auto& orders = config.acc.qsl_orders;
    const bool use_qsl = !orders.empty();
    const bool use_asclt = !config.acc.asclt_grid.empty();
    const bool use_lil = config.acc.lil;
    const bool use_lwin = config.acc.l_window_hi > 0;
    const bool need_dev = use_qsl || use_asclt || use_lil || use_lwin;
    if (use_lwin)
        obs.l_window.assign(static_cast<std::size_t>(config.acc.l_window_hi
                                                     - config.acc.l_window_lo + 1), 0.0);

    std::vector<NeumaierSum> qsl(orders.size());
    std::vector<double> asclt_mass(config.acc.asclt_grid.size(), 0.0);
    double asclt_weight = 0.0;
    double lil_sup = 0.0;
    NeumaierSum qv;
    NeumaierSum m_incr;

    WalkState state;
    std::size_t next_cp = 0;
    const double* a = tables.a.data();
    const double* A = tables.A.data();

    for (std::int64_t k = 1; k <= config.horizon; ++k) {
        const double kd = static_cast<double>(k);
        // conditional mean/variance of the increment given F_{k-1}
        double cond_mean, cond_var;
        if (k == 1) {
            cond_mean = dc.omega;
            cond_var = params.p + params.q - 2.0 * dc.omega * dc.beta + dc.omega * dc.omega;
        } else {
            const double prev = static_cast<double>(k - 1);
            cond_mean = dc.alpha * static_cast<double>(state.s) / prev + dc.omega;
            cond_var = dc.gamma * static_cast<double>(state.z) / prev + dc.tau
                     - cond_mean * cond_mean;
        }
        qv.add(a[k] * a[k] * cond_var);

        const int x = step(state, params, config.sampler, rng);

        const double xi = static_cast<double>(x) - cond_mean;
        m_incr.add(a[k] * xi);
        obs.max_abs_xi = std::max(obs.max_abs_xi, std::abs(xi));

        if (need_dev) {
            const double dev = static_cast<double>(state.s) / kd - dc.mu;
            const double dev2 = dev * dev;
            double lk = 0.0;
            if ((critical_weights || use_lil || use_lwin) && k >= 2) lk = std::log(kd);

            if (use_qsl && (!critical_weights || k >= 2)) {
                for (std::size_t i = 0; i < orders.size(); ++i) {
                    double term;
                    switch (orders[i]) {
                        case 1: term = dev2; break;
                        case 2: term = kd * dev2 * dev2; break;
                        default: term = kd * kd * dev2 * dev2 * dev2; break;
                    }
                    if (critical_weights) {
                        double w = lk * lk;  // (log k)^{r+1}
                        for (int rr = 1; rr < orders[i]; ++rr) w *= lk;
                        term /= w;
                    }
                    qsl[i].add(term);
                }
            }
            if (use_asclt && (!critical_weights || k >= 2)) {
                const double scale = critical_weights ? std::sqrt(kd / lk) : std::sqrt(kd);
                const double u = scale * dev;
                const double w = critical_weights ? 1.0 / (kd * lk) : 1.0 / kd;
                for (std::size_t i = 0; i < asclt_mass.size(); ++i)
                    if (u <= config.acc.asclt_grid[i]) asclt_mass[i] += w;
                asclt_weight += w;
            }
            if (use_lil && k >= config.acc.lil_n0) {
                const double llk = std::log(lk);
                const double norm = critical_weights
                                        ? std::sqrt(kd / (2.0 * lk * std::log(llk)))
                                        : std::sqrt(kd / (2.0 * llk));
                lil_sup = std::max(lil_sup, norm * std::abs(dev));
            }
            if (use_lwin && k >= config.acc.l_window_lo && k <= config.acc.l_window_hi) {
                obs.l_window[static_cast<std::size_t>(k - config.acc.l_window_lo)] =
                    std::pow(kd, 1.0 - dc.alpha) * dev;
            }
        }

        if (next_cp < config.checkpoints.size() && k == config.checkpoints[next_cp]) {
            CheckpointRecord rec;
            rec.n = k;
            rec.s = state.s;
            rec.z = state.z;
            rec.martingale = a[k] * static_cast<double>(state.s) - dc.omega * A[k];
            rec.martingale_incr = m_incr.value();
            rec.quad_variation = qv.value();
            rec.qsl.reserve(qsl.size());
            for (const auto& acc : qsl) rec.qsl.push_back(acc.value());
            rec.asclt_mass = asclt_mass;
            rec.asclt_weight = asclt_weight;
            rec.lil_sup = lil_sup;
            obs.checkpoints.push_back(std::move(rec));
            ++next_cp;
        }
    }
    obs.l_proxy = std::pow(static_cast<double>(config.horizon), 1.0 - dc.alpha)
                * (static_cast<double>(state.s) / static_cast<double>(config.horizon) - dc.mu);
    return obs;
}

bool identical(const PathObservation& a, const PathObservation& b) {
    auto same = [](double x, double y) {
        return std::memcmp(&x, &y, sizeof(double)) == 0;
    };
    if (a.path_index != b.path_index || a.checkpoints.size() != b.checkpoints.size()
        || a.l_window.size() != b.l_window.size() || !same(a.l_proxy, b.l_proxy)
        || !same(a.max_abs_xi, b.max_abs_xi))
        return false;
    for (std::size_t i = 0; i < a.l_window.size(); ++i)
        if (!same(a.l_window[i], b.l_window[i])) return false;
    for (std::size_t i = 0; i < a.checkpoints.size(); ++i) {
        const auto& x = a.checkpoints[i];
        const auto& y = b.checkpoints[i];
        if (x.n != y.n || x.s != y.s || x.z != y.z) return false;
        if (!same(x.martingale, y.martingale) || !same(x.martingale_incr, y.martingale_incr)
            || !same(x.quad_variation, y.quad_variation) || !same(x.asclt_weight, y.asclt_weight)
            || !same(x.lil_sup, y.lil_sup))
            return false;
        if (x.qsl.size() != y.qsl.size() || x.asclt_mass.size() != y.asclt_mass.size())
            return false;
        for (std::size_t j = 0; j < x.qsl.size(); ++j)
            if (!same(x.qsl[j], y.qsl[j])) return false;
        for (std::size_t j = 0; j < x.asclt_mass.size(); ++j)
            if (!same(x.asclt_mass[j], y.asclt_mass[j])) return false;
    }
    return true;
}

std::vector<PathObservation> run_ensemble(const SimConfig& config, const SequenceTables& tables) {
    config.validate();
    const std::int64_t n_paths = config.num_paths;
    std::vector<PathObservation> out(static_cast<std::size_t>(n_paths));

    unsigned workers = config.num_workers;
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::int64_t>(workers, n_paths));

    const std::int64_t block = std::max<std::int64_t>(1, n_paths / (8 * workers));
    std::atomic<std::int64_t> cursor{0};
    std::mutex err_mutex;
    std::string first_error;

    auto work = [&]() {
        for (;;) {
            const std::int64_t lo = cursor.fetch_add(block);
            if (lo >= n_paths) return;
            const std::int64_t hi = std::min(lo + block, n_paths);
            try {
                for (std::int64_t i = lo; i < hi; ++i)
                    out[static_cast<std::size_t>(i)] = simulate_path(config, tables, i);
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> g(err_mutex);
                if (first_error.empty())
                    first_error = "path block [" + std::to_string(lo) + ", " + std::to_string(hi)
                                + "): " + e.what();
                return;
            }
        }
    };

    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    if (!first_error.empty()) throw std::runtime_error("run_ensemble: " + first_error);
    return out;
}

Ensemble simulate_ensemble(const SimConfig& config) {
    config.validate();
    const DerivedConstants dc = derive_constants(config.params);
    const SequenceTables tables = build_tables(dc.alpha, dc.gamma, config.horizon);
    Ensemble ens;
    ens.config = config;
    ens.constants = dc;
    ens.paths = run_ensemble(config, tables);
    return ens;
}

}  // namespace lrrw

// Command-line laboratory for the lazy reinforced random walk: exact
// distributions, closed-form constants and Monte Carlo verification of the
// limit theorems.
#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

#include "lrrw/exact.hpp"
#include "lrrw/model.hpp"
#include "lrrw/report.hpp"
#include "lrrw/sequences.hpp"
#include "lrrw/simulate.hpp"
#include "lrrw/stats.hpp"
#include "lrrw/verify.hpp"

namespace fs = std::filesystem;
using lrrw::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;

struct CommonOpts {
    lrrw::ModelParams params{0.5, 0.5, 0.0, 0.5};
    std::string out = "lrrw_out";
};

void add_param_flags(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--p", o.params.p, "probability of a +1 step");
    cmd->add_option("--q", o.params.q, "probability of a -1 step");
    cmd->add_option("--r", o.params.r, "probability of a 0 step");
    cmd->add_option("--theta", o.params.theta, "memory probability in [0,1)");
    cmd->set_config("--config", "", "key-value config file; flags override file values");
}

json constants_json(const lrrw::ModelParams& params) {
    const auto dc = lrrw::derive_constants(params);
    json j{{"params", lrrw::to_json(params)}, {"constants", lrrw::to_json(dc)}};
    if (dc.regime == lrrw::Regime::Superdiffusive)
        j["superdiffusive"] = lrrw::to_json(lrrw::superdiffusive_constants(params));
    return j;
}

int cmd_constants(const CommonOpts& o, bool as_json) {
    const json j = constants_json(o.params);
    if (as_json) {
        std::cout << j.dump(2) << "\n";
        return kExitOk;
    }
    const auto& c = j["constants"];
    std::cout << "regime   " << c["regime"].get<std::string>() << "\n";
    for (const char* k : {"alpha", "omega", "beta", "tau", "gamma", "sigma2", "mu"})
        std::printf("%-8s %.17g\n", k, c[k].get<double>());
    if (c.contains("ell")) std::printf("%-8s %.17g\n", "ell", c["ell"].get<double>());
    if (j.contains("superdiffusive")) {
        std::cout << "superdiffusive block:\n";
        for (auto& [k, v] : j["superdiffusive"].items())
            std::printf("  %-24s %.17g\n", k.c_str(), v.get<double>());
    }
    return kExitOk;
}

int cmd_oracle(const CommonOpts& o, std::int64_t n, std::int64_t cap) {
    const auto dist = lrrw::evolve_exact(o.params, n, cap);
    const auto dc = lrrw::derive_constants(o.params);
    const auto tables = lrrw::build_tables(dc.alpha, dc.gamma, n);
    const auto m = lrrw::exact_moments(dist, tables, dc);

    fs::create_directories(o.out);
    lrrw::write_distribution_csv(fs::path(o.out) / "distribution.csv", dist);

    struct Row {
        const char* name;
        double oracle, closed;
    };
    const Row rows[] = {
        {"E[S_n]", m.es, lrrw::closed_form_ES(n, dc, tables)},
        {"E[S_n^2]", m.es2, lrrw::closed_form_ES2(n, o.params, dc, tables)},
        {"E[Z_n]", m.ez, lrrw::closed_form_EZ(n, o.params, tables)},
        {"E[M_n]", m.em, dc.beta - dc.omega},
    };
    std::ofstream cmp(fs::path(o.out) / "comparison.csv");
    cmp << "moment,oracle,closed_form,abs_diff\n" << std::setprecision(17);
    std::printf("%-10s %22s %22s %12s\n", "moment", "oracle", "closed form", "abs diff");
    for (const auto& row : rows) {
        std::printf("%-10s %22.15g %22.15g %12.3e\n", row.name, row.oracle, row.closed,
                    std::abs(row.oracle - row.closed));
        cmp << row.name << ',' << row.oracle << ',' << row.closed << ','
            << std::abs(row.oracle - row.closed) << '\n';
    }
    if (dc.regime == lrrw::Regime::Superdiffusive) {
        const auto sc = lrrw::superdiffusive_constants(o.params);
        const double em2 = lrrw::closed_form_EM2(n, o.params, dc, sc, tables);
        std::printf("%-10s %22.15g %22.15g %12.3e\n", "E[M_n^2]", m.em2, em2,
                    std::abs(m.em2 - em2));
        cmp << "E[M_n^2]," << m.em2 << ',' << em2 << ',' << std::abs(m.em2 - em2) << '\n';
    }
    std::cout << "wrote " << o.out << "/distribution.csv\n";
    return kExitOk;
}

int cmd_tables(const std::string& out, double alpha, double gamma, std::int64_t horizon,
               std::int64_t stride) {
    const auto tables = lrrw::build_tables(alpha, gamma, horizon);
    lrrw::write_tables_csv(out, tables, stride);
    std::cout << "wrote " << out << "\n";
    return kExitOk;
}

int cmd_simulate(const CommonOpts& o, lrrw::SimConfig config, bool csv) {
    config.params = o.params;
    if (config.checkpoints.empty()) config.checkpoints = {config.horizon};
    lrrw::ExperimentManifest manifest;
    manifest.started_at = lrrw::timestamp_utc();
    const auto ens = lrrw::simulate_ensemble(config);
    manifest.finished_at = lrrw::timestamp_utc();
    manifest.config = ens.config;
    manifest.constants = ens.constants;

    fs::create_directories(o.out);
    const fs::path spool = fs::path(o.out) / "spool.bin";
    lrrw::write_spool(spool, ens.paths);
    manifest.output_hashes.emplace_back("spool.bin", lrrw::sha256_file_hex(spool));
    if (csv) {
        const fs::path spool_csv = fs::path(o.out) / "spool.csv";
        lrrw::write_spool_csv(spool_csv, ens.paths);
        manifest.output_hashes.emplace_back("spool.csv", lrrw::sha256_file_hex(spool_csv));
    }
    manifest.write(fs::path(o.out) / "manifest.json");
    std::cout << "wrote " << o.out << "/spool.bin (" << ens.paths.size() << " paths), manifest.json\n";
    return kExitOk;
}

// Regime-aware default experiment for one theorem id.
struct VerifyPlan {
    std::int64_t horizon;
    std::int64_t paths;
    std::vector<double> grid;  // fclt time grid
};

int cmd_verify(const CommonOpts& o, const std::string& theorem, std::int64_t n_opt,
               std::int64_t paths_opt, std::uint64_t seed, const std::string& sampler_name,
               unsigned workers) {
    const auto dc = lrrw::derive_constants(o.params);
    const bool super = dc.regime == lrrw::Regime::Superdiffusive;
    const std::vector<std::string> valid =
        super ? std::vector<std::string>{"lln", "moments-L", "fluctuations", "lil", "all"}
              : std::vector<std::string>{"lln", "clt", "fclt", "qsl", "asclt", "lil", "all"};
    if (std::find(valid.begin(), valid.end(), theorem) == valid.end()) {
        std::cerr << "unknown theorem id '" << theorem << "' for the " << to_string(dc.regime)
                  << " regime; valid:";
        for (const auto& v : valid) std::cerr << " " << v;
        std::cerr << "\n";
        return kExitUsage;
    }
    std::vector<std::string> selected;
    if (theorem == "all") {
        selected = valid;
        selected.pop_back();
    } else {
        selected = {theorem};
    }

    lrrw::SimConfig base;
    base.params = o.params;
    base.master_seed = seed;
    base.sampler = lrrw::sampler_from_string(sampler_name);
    base.num_workers = workers;

    fs::create_directories(fs::path(o.out) / "plots");
    json verdicts = json::array();
    bool all_pass = true;

    auto emit = [&](const std::string& id, bool pass, const json& body) {
        std::cout << (pass ? "[PASS] " : "[FAIL] ") << id << "\n";
        verdicts.push_back(body);
        all_pass = all_pass && pass;
    };

    for (const auto& id : selected) {
        lrrw::SimConfig cfg = base;
        if (id == "lln") {
            cfg.horizon = n_opt > 0 ? n_opt : 10000;
            cfg.num_paths = paths_opt > 0 ? paths_opt : (super ? 32 : 4000);
            for (std::int64_t k = cfg.horizon; k >= 8 && cfg.checkpoints.size() < 4; k /= 8)
                cfg.checkpoints.insert(cfg.checkpoints.begin(), k);
            const auto ens = lrrw::simulate_ensemble(cfg);
            const auto v = lrrw::verify_lln(ens);
            lrrw::write_metrics_csv(fs::path(o.out) / "plots" / (v.id + ".csv"), v);
            emit(v.id, v.pass, lrrw::to_json(v));
        } else if (id == "clt") {
            cfg.horizon = n_opt > 0 ? n_opt : 10000;
            cfg.num_paths = paths_opt > 0 ? paths_opt : 20000;
            cfg.checkpoints = {cfg.horizon};
            const auto ens = lrrw::simulate_ensemble(cfg);
            const auto v = lrrw::verify_clt(ens);
            emit(dc.regime == lrrw::Regime::Critical ? "clt-critical" : "clt-diffusive", v.pass,
                 lrrw::to_json(v));
        } else if (id == "fclt") {
            cfg.horizon = n_opt > 0 ? n_opt : 10000;
            cfg.num_paths = paths_opt > 0 ? paths_opt : 4000;
            const bool crit = dc.regime == lrrw::Regime::Critical;
            const std::vector<double> grid =
                crit ? std::vector<double>{0.6, 0.8, 1.0} : std::vector<double>{0.25, 0.5, 1.0};
            for (double t : grid) {
                const double m = crit ? std::pow(static_cast<double>(cfg.horizon), t)
                                      : static_cast<double>(cfg.horizon) * t;
                cfg.checkpoints.push_back(static_cast<std::int64_t>(std::floor(m)));
            }
            std::sort(cfg.checkpoints.begin(), cfg.checkpoints.end());
            cfg.checkpoints.erase(std::unique(cfg.checkpoints.begin(), cfg.checkpoints.end()),
                                  cfg.checkpoints.end());
            const auto ens = lrrw::simulate_ensemble(cfg);
            const auto v = lrrw::verify_fclt_covariance(ens, grid);
            lrrw::write_metrics_csv(fs::path(o.out) / "plots" / (v.id + ".csv"), v);
            emit(v.id, v.pass, lrrw::to_json(v));
        } else if (id == "qsl" || id == "asclt" || id == "lil") {
            cfg.horizon = n_opt > 0 ? n_opt : 100000;
            cfg.num_paths = paths_opt > 0 ? paths_opt : 192;
            cfg.checkpoints = {cfg.horizon / 100, cfg.horizon / 10, cfg.horizon};
            if (!super) {
                cfg.acc.qsl_orders = {1, 2};
                const double sd = std::sqrt(dc.clt_variance());
                cfg.acc.asclt_grid = {-sd, 0.0, sd};
                cfg.acc.lil = true;
                cfg.acc.lil_n0 = 1000;
            } else {
                // fluctuation LIL window sized by the 0.1 proxy-bias budget
                const double ratio = std::pow(0.1, 1.0 / (dc.alpha - 0.5));
                cfg.acc.l_window_lo = 100;
                cfg.acc.l_window_hi = std::max<std::int64_t>(
                    cfg.acc.l_window_lo,
                    static_cast<std::int64_t>(static_cast<double>(cfg.horizon) * ratio));
            }
            const auto ens = lrrw::simulate_ensemble(cfg);
            if (id == "qsl") {
                const auto v = lrrw::verify_qsl_moments(ens);
                lrrw::write_metrics_csv(fs::path(o.out) / "plots" / (v.id + ".csv"), v);
                emit(v.id, v.pass, lrrw::to_json(v));
            } else if (id == "asclt") {
                const auto v = lrrw::verify_asclt(ens);
                lrrw::write_metrics_csv(fs::path(o.out) / "plots" / (v.id + ".csv"), v);
                emit(v.id, v.pass, lrrw::to_json(v));
            } else {
                const auto v = lrrw::verify_lil(ens);
                lrrw::write_metrics_csv(fs::path(o.out) / "plots" / (v.id + ".csv"), v);
                emit(v.id, v.pass, lrrw::to_json(v));
            }
        } else if (id == "moments-L") {
            cfg.horizon = n_opt > 0 ? n_opt : 100000;
            cfg.num_paths = paths_opt > 0 ? paths_opt : 10000;
            cfg.checkpoints = {cfg.horizon};
            const auto ens = lrrw::simulate_ensemble(cfg);
            const auto v = lrrw::estimate_L(ens, lrrw::superdiffusive_constants(o.params));
            emit("moments-L", v.pass, lrrw::to_json(v));
        } else if (id == "fluctuations") {
            const std::int64_t n_small = n_opt > 0 ? n_opt : 1000;
            const double ratio = std::pow(0.1, -1.0 / (dc.alpha - 0.5));
            cfg.horizon = static_cast<std::int64_t>(std::ceil(static_cast<double>(n_small) * ratio));
            cfg.num_paths = paths_opt > 0 ? paths_opt : 4000;
            cfg.checkpoints = {n_small, cfg.horizon};
            const auto ens = lrrw::simulate_ensemble(cfg);
            const auto v = lrrw::verify_superdiffusive_fluctuations(ens, n_small);
            emit("fluctuations", v.pass, lrrw::to_json(v));
        }
    }

    json report{{"params", lrrw::to_json(o.params)},
                {"constants", lrrw::to_json(dc)},
                {"seed", seed},
                {"generator", lrrw::kGeneratorId},
                {"verdicts", verdicts}};
    std::ofstream out(fs::path(o.out) / "verdicts.json");
    out << report.dump(2) << "\n";
    std::cout << "wrote " << o.out << "/verdicts.json\n";
    return all_pass ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"lazy reinforced random walk laboratory"};
    app.require_subcommand(1);

    CommonOpts copts;
    std::int64_t n = 0, paths = 0, cap = lrrw::kOracleCap, horizon = 1000, stride = 1;
    std::uint64_t seed = 1;
    std::string sampler = "kernel", theorem = "all", tables_out = "tables.csv";
    double alpha = 0.0, gamma = 0.0;
    unsigned workers = 0;
    bool as_json = false, csv = false;
    lrrw::SimConfig sim_cfg;

    auto* c_const = app.add_subcommand("constants", "print derived constants for the parameters");
    add_param_flags(c_const, copts);
    c_const->add_flag("--json", as_json, "emit JSON");

    auto* c_oracle = app.add_subcommand("oracle", "exact distribution and closed-form comparison");
    add_param_flags(c_oracle, copts);
    c_oracle->add_option("--n", n, "horizon of the exact evolution")->required();
    c_oracle->add_option("--cap", cap, "state-space cap");
    c_oracle->add_option("--out", copts.out, "output directory");

    auto* c_tables = app.add_subcommand("tables", "dump sequence tables to CSV");
    c_tables->add_option("--alpha", alpha, "exponent of the a-sequence")->required();
    c_tables->add_option("--gamma", gamma, "exponent of the b-sequence");
    c_tables->add_option("--horizon", horizon, "table horizon");
    c_tables->add_option("--stride", stride, "sampling stride");
    c_tables->add_option("--out", tables_out, "output CSV path");

    auto* c_sim = app.add_subcommand("simulate", "spool a checkpointed ensemble");
    add_param_flags(c_sim, copts);
    c_sim->add_option("--n", sim_cfg.horizon, "path horizon")->required();
    c_sim->add_option("--paths", sim_cfg.num_paths, "ensemble size");
    c_sim->add_option("--seed", sim_cfg.master_seed, "master seed");
    c_sim->add_option("--sampler", sampler, "latent|kernel");
    c_sim->add_option("--checkpoints", sim_cfg.checkpoints, "observation times")->delimiter(',');
    c_sim->add_option("--workers", sim_cfg.num_workers, "worker threads (0 = auto)");
    c_sim->add_option("--out", copts.out, "output directory");
    c_sim->add_flag("--csv", csv, "also write spool.csv");

    auto* c_verify = app.add_subcommand("verify", "run Monte Carlo theorem verdicts");
    add_param_flags(c_verify, copts);
    c_verify->add_option("--theorem", theorem, "lln|clt|fclt|qsl|asclt|lil|moments-L|fluctuations|all");
    c_verify->add_option("--n", n, "horizon override");
    c_verify->add_option("--paths", paths, "ensemble size override");
    c_verify->add_option("--seed", seed, "master seed");
    c_verify->add_option("--sampler", sampler, "latent|kernel");
    c_verify->add_option("--workers", workers, "worker threads (0 = auto)");
    c_verify->add_option("--out", copts.out, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (c_const->parsed()) return cmd_constants(copts, as_json);
        if (c_oracle->parsed()) return cmd_oracle(copts, n, cap);
        if (c_tables->parsed()) return cmd_tables(tables_out, alpha, gamma, horizon, stride);
        if (c_sim->parsed()) {
            sim_cfg.sampler = lrrw::sampler_from_string(sampler);
            return cmd_simulate(copts, sim_cfg, csv);
        }
        if (c_verify->parsed()) return cmd_verify(copts, theorem, n, paths, seed, sampler, workers);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitVerifyFailed;
    }
    return kExitUsage;
}

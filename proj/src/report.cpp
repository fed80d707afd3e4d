#include "lrrw/report.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace lrrw {

json to_json(const ModelParams& p) {
    return json{{"p", p.p}, {"q", p.q}, {"r", p.r}, {"theta", p.theta}};
}

json to_json(const DerivedConstants& c) {
    json j{{"alpha", c.alpha}, {"omega", c.omega},  {"beta", c.beta},
           {"tau", c.tau},     {"gamma", c.gamma},  {"sigma2", c.sigma2},
           {"mu", c.mu},       {"regime", to_string(c.regime)}};
    if (c.ell) j["ell"] = *c.ell;
    return j;
}

json to_json(const SuperdiffusiveConstants& c) {
    return json{{"nabla", c.nabla},
                {"t1", c.t1},
                {"t2", c.t2},
                {"mean_L", c.mean_L},
                {"second_moment_L", c.second_moment_L},
                {"second_moment_L_printed", c.second_moment_L_printed},
                {"mean_M", c.mean_M},
                {"second_moment_M", c.second_moment_M}};
}

json to_json(const SimConfig& c) {
    return json{{"params", to_json(c.params)},
                {"horizon", c.horizon},
                {"checkpoints", c.checkpoints},
                {"num_paths", c.num_paths},
                {"master_seed", c.master_seed},
                {"sampler", to_string(c.sampler)},
                {"qsl_orders", c.acc.qsl_orders},
                {"asclt_grid", c.acc.asclt_grid},
                {"lil", c.acc.lil},
                {"lil_n0", c.acc.lil_n0},
                {"l_window", {c.acc.l_window_lo, c.acc.l_window_hi}},
                {"num_workers", c.num_workers}};
}

json to_json(const Metric& m) {
    return json{{"name", m.name},
                {"observed", m.observed},
                {"target", m.target},
                {"band", m.band},
                {"pass", m.pass}};
}

json to_json(const TheoremVerdict& v) {
    json metrics = json::array();
    for (const auto& m : v.metrics) metrics.push_back(to_json(m));
    return json{{"id", v.id},
                {"regime", to_string(v.regime)},
                {"pass", v.pass},
                {"qualitative", v.qualitative},
                {"metrics", metrics},
                {"note", v.note}};
}

json to_json(const GofResult& g) {
    return json{{"statistic", g.statistic}, {"p_value", g.p_value},
                {"sample_size", g.sample_size}, {"ref_mean", g.ref_mean},
                {"ref_variance", g.ref_variance}, {"level", g.level},
                {"reject", g.reject}, {"testable", g.testable}, {"note", g.note}};
}

json to_json(const CltVerdict& v) {
    return json{{"gof", to_json(v.gof)}, {"variance", to_json(v.variance)},
                {"pass", v.pass}, {"testable", v.testable}, {"note", v.note}};
}

json to_json(const McEstimate& e) {
    return json{{"value", e.value}, {"stderr", e.stderr_}, {"n_paths", e.n_paths}};
}

json to_json(const LMomentsVerdict& v) {
    return json{{"mean", to_json(v.mean)},
                {"second_moment", to_json(v.second_moment)},
                {"mean_band", v.mean_band},
                {"second_band", v.second_band},
                {"target_mean", v.target_mean},
                {"target_second", v.target_second},
                {"target_second_printed", v.target_second_printed},
                {"mean_pass", v.mean_pass},
                {"second_pass", v.second_pass},
                {"printed_value_contained", v.printed_value_contained},
                {"pass", v.pass},
                {"note", v.note}};
}

json to_json(const FluctuationVerdict& v) {
    return json{{"gof", to_json(v.gof)},       {"variance", to_json(v.variance)},
                {"bias_bound", v.bias_bound},  {"r_n2", v.r_n2},
                {"pass", v.pass},              {"testable", v.testable},
                {"note", v.note}};
}

std::string sha256_hex(const std::string& bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("sha256_hex: digest failure");
    std::ostringstream os;
    for (unsigned int i = 0; i < len; ++i)
        os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
    return os.str();
}

std::string sha256_file_hex(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("sha256_file_hex: cannot open " + path.string());
    std::ostringstream os;
    os << in.rdbuf();
    return sha256_hex(os.str());
}

std::string timestamp_utc() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

json ExperimentManifest::to_json() const {
    json hashes = json::object();
    for (const auto& [file, hash] : output_hashes) hashes[file] = hash;
    return json{{"config", lrrw::to_json(config)},
                {"constants", lrrw::to_json(constants)},
                {"generator", generator},
                {"started_at", started_at},
                {"finished_at", finished_at},
                {"output_hashes", hashes}};
}

void ExperimentManifest::write(const std::filesystem::path& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("manifest: cannot write " + path.string());
    out << to_json().dump(2) << "\n";
}

namespace {

template <typename T>
void put_le(std::string& buf, T value) {
    static_assert(sizeof(T) == 8);
    std::uint64_t u;
    std::memcpy(&u, &value, 8);
    for (int i = 0; i < 8; ++i) buf.push_back(static_cast<char>((u >> (8 * i)) & 0xFF));
}

template <typename T>
T get_le(const char* p) {
    std::uint64_t u = 0;
    for (int i = 0; i < 8; ++i)
        u |= static_cast<std::uint64_t>(static_cast<unsigned char>(p[i])) << (8 * i);
    T value;
    std::memcpy(&value, &u, 8);
    return value;
}

}  // namespace

void write_spool(const std::filesystem::path& path, const std::vector<PathObservation>& paths) {
    std::string buf;
    for (const auto& p : paths) {
        for (const auto& c : p.checkpoints) {
            put_le(buf, static_cast<std::uint64_t>(p.path_index));
            put_le(buf, static_cast<std::uint64_t>(c.n));
            put_le(buf, c.s);
            put_le(buf, static_cast<std::uint64_t>(c.z));
            put_le(buf, c.martingale);
        }
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_spool: cannot write " + path.string());
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

std::vector<SpoolRecord> read_spool(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("read_spool: cannot open " + path.string());
    std::ostringstream os;
    os << in.rdbuf();
    const std::string buf = os.str();
    if (buf.size() % 40 != 0) throw std::runtime_error("read_spool: truncated record stream");
    std::vector<SpoolRecord> out;
    out.reserve(buf.size() / 40);
    for (std::size_t off = 0; off < buf.size(); off += 40) {
        SpoolRecord r;
        r.path_index = get_le<std::uint64_t>(buf.data() + off);
        r.n = get_le<std::uint64_t>(buf.data() + off + 8);
        r.s = get_le<std::int64_t>(buf.data() + off + 16);
        r.z = get_le<std::uint64_t>(buf.data() + off + 24);
        r.martingale = get_le<double>(buf.data() + off + 32);
        out.push_back(r);
    }
    return out;
}

void write_spool_csv(const std::filesystem::path& path, const std::vector<PathObservation>& paths) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_spool_csv: cannot write " + path.string());
    out << "path,n,s,z,M\n";
    out << std::setprecision(17);
    for (const auto& p : paths)
        for (const auto& c : p.checkpoints)
            out << p.path_index << ',' << c.n << ',' << c.s << ',' << c.z << ','
                << c.martingale << '\n';
}

void write_tables_csv(const std::filesystem::path& path, const SequenceTables& tables,
                      std::int64_t stride) {
    if (stride < 1) throw std::invalid_argument("write_tables_csv: stride >= 1 required");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_tables_csv: cannot write " + path.string());
    out << "n,a,A,v,f,b,B\n" << std::setprecision(17);
    for (std::int64_t n = 1; n <= tables.horizon; n += stride) {
        const auto i = static_cast<std::size_t>(n);
        out << n << ',' << tables.a[i] << ',' << tables.A[i] << ',' << tables.v[i] << ','
            << tables.f[i] << ',' << tables.b[i] << ',' << tables.B[i] << '\n';
    }
}

void write_distribution_csv(const std::filesystem::path& path, const ExactDistribution& dist) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_distribution_csv: cannot write " + path.string());
    out << "s,z,mass\n" << std::setprecision(17);
    dist.for_each([&](std::int64_t s, std::int64_t z, double mass) {
        if (mass > 0.0) out << s << ',' << z << ',' << mass << '\n';
    });
}

void write_metrics_csv(const std::filesystem::path& path, const TheoremVerdict& verdict) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_metrics_csv: cannot write " + path.string());
    out << "name,observed,target,band,pass\n" << std::setprecision(17);
    for (const auto& m : verdict.metrics)
        out << '"' << m.name << "\"," << m.observed << ',' << m.target << ',' << m.band << ','
            << (m.pass ? 1 : 0) << '\n';
}

}  // namespace lrrw

// Persistence: experiment manifests, verdict JSON, plot CSVs and the
// checkpoint spool (little-endian records: path u64, n u64, s i64, z u64,
// M f64).
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "lrrw/exact.hpp"
#include "lrrw/simulate.hpp"
#include "lrrw/verify.hpp"

namespace lrrw {

using nlohmann::json;

json to_json(const ModelParams& p);
json to_json(const DerivedConstants& c);
json to_json(const SuperdiffusiveConstants& c);
json to_json(const SimConfig& c);
json to_json(const Metric& m);
json to_json(const TheoremVerdict& v);
json to_json(const GofResult& g);
json to_json(const CltVerdict& v);
json to_json(const LMomentsVerdict& v);
json to_json(const FluctuationVerdict& v);
json to_json(const McEstimate& e);

/// SHA-256 of a byte string, hex-encoded.
std::string sha256_hex(const std::string& bytes);
std::string sha256_file_hex(const std::filesystem::path& path);

/// Reproduction recipe persisted next to every experiment output. Re-running
/// the manifest reproduces bitwise-identical per-path checkpoint records.
struct ExperimentManifest {
    SimConfig config;
    DerivedConstants constants;
    std::string generator = kGeneratorId;
    std::string started_at;
    std::string finished_at;
    std::vector<std::pair<std::string, std::string>> output_hashes;  // file -> sha256

    json to_json() const;
    void write(const std::filesystem::path& path) const;
};

std::string timestamp_utc();

// ---------------------------------------------------------------------------
// Checkpoint spool
// ---------------------------------------------------------------------------

struct SpoolRecord {
    std::uint64_t path_index = 0;
    std::uint64_t n = 0;
    std::int64_t s = 0;
    std::uint64_t z = 0;
    double martingale = 0.0;
};

void write_spool(const std::filesystem::path& path, const std::vector<PathObservation>& paths);
std::vector<SpoolRecord> read_spool(const std::filesystem::path& path);
void write_spool_csv(const std::filesystem::path& path, const std::vector<PathObservation>& paths);

// ---------------------------------------------------------------------------
// CSV emitters
// ---------------------------------------------------------------------------

/// Sampled dump of the sequence tables (columns n, a, A, v, f, b, B).
void write_tables_csv(const std::filesystem::path& path, const SequenceTables& tables,
                      std::int64_t stride);

/// Exact distribution dump (columns s, z, mass).
void write_distribution_csv(const std::filesystem::path& path, const ExactDistribution& dist);

/// Per-metric rows of a verdict (name, observed, target, band, pass).
void write_metrics_csv(const std::filesystem::path& path, const TheoremVerdict& verdict);

}  // namespace lrrw

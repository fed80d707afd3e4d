// Reproducible per-path random streams: a SplitMix64 chain seeds the full
// state of one mt19937_64 per path, derived only from (master_seed,
// path_index). Identical draws for any worker count or scheduling.
#pragma once

#include <cstdint>
#include <random>

namespace lrrw {

/// Recorded in every manifest; reproducibility is per build of this id.
inline constexpr const char* kGeneratorId = "mt19937_64/splitmix64-v1";

struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
};

/// Seed-sequence shim feeding SplitMix64 output into engine construction.
class SplitMixSeq {
public:
    using result_type = std::uint32_t;

    explicit SplitMixSeq(std::uint64_t seed) : seed_(seed) {}

    static constexpr std::size_t size() { return 2; }
    template <typename It>
    void param(It dest) const {
        *dest++ = static_cast<result_type>(seed_);
        *dest = static_cast<result_type>(seed_ >> 32);
    }

    template <typename It>
    void generate(It first, It last) {
        SplitMix64 sm(seed_);
        while (first != last) {
            const std::uint64_t v = sm.next();
            *first++ = static_cast<std::uint32_t>(v);
            if (first != last) *first++ = static_cast<std::uint32_t>(v >> 32);
        }
    }

private:
    std::uint64_t seed_;
};

/// Stream seed for a path: two finalizer rounds over the pair.
inline std::uint64_t mix_stream_seed(std::uint64_t master_seed, std::uint64_t path_index) {
    SplitMix64 sm(master_seed ^ (0x9E3779B97F4A7C15ULL * (path_index + 1)));
    sm.next();
    return sm.next();
}

/// Per-path uniform generator.
class PathRng {
public:
    PathRng(std::uint64_t master_seed, std::uint64_t path_index) {
        SplitMixSeq seq(mix_stream_seed(master_seed, path_index));
        engine_.seed(seq);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double u01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 engine_;
};

}  // namespace lrrw

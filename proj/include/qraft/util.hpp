#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace qraft {

/// Raised when an input file cannot be parsed. Carries a line number when known.
struct parse_error : std::runtime_error {
    explicit parse_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Raised when a requested configuration has no feasible solution
/// (e.g., no code distance below the cap meets the error budget).
struct infeasible_error : std::runtime_error {
    explicit infeasible_error(const std::string& msg) : std::runtime_error(msg) {}
};

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

inline bool is_odd(long long v) { return v % 2 != 0; }

inline bool is_probability(double p) { return p >= 0.0 && p <= 1.0 && std::isfinite(p); }

// SplitMix64. Used both as a mixer for deriving per-shot keys and as the
// per-shot generator, so shot streams depend only on (seed, shot index).
struct Rng {
    uint64_t state;

    explicit Rng(uint64_t s) : state(s) {}

    // Stream for one shot: decorrelates (seed, shot) into an independent state.
    static Rng for_shot(uint64_t seed, uint64_t shot) {
        Rng mix(seed + 0x9e3779b97f4a7c15ULL * (shot + 1));
        mix.next();
        mix.next();
        return mix;
    }

    uint64_t next() {
        uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1).
    double uniform() { return double(next() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n).
    uint64_t below(uint64_t n) { return next() % n; }
};

/// Formats a double as a decimal string with 12 significant digits.
/// Keeps report files diffable across platforms.
std::string format12(double v);

/// Population mean and standard deviation.
double mean_of(const std::vector<double>& xs);
double stddev_of(const std::vector<double>& xs);

}  // namespace qraft

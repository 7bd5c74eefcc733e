#pragma once

#include <cstdint>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace oro {

using dvec = std::vector<double>;
// Sparse row: (column index, coefficient) pairs, indices strictly increasing.
using sprow = std::vector<std::pair<int, double>>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline double dot(const dvec& a, const dvec& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double dot(const sprow& row, const dvec& x) {
    double s = 0.0;
    for (const auto& [j, v] : row) s += v * x[j];
    return s;
}

inline double sign(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

/// Thrown when an argument violates a documented domain restriction.
class DomainError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

// ---------------------------------------------------------------------------
// Deterministic counter-based random stream.
//
// Every draw is a pure function of (seed, k1, k2, k3, counter), so results do
// not depend on call order or parallel scheduling. The mixer is the SplitMix64
// finalizer applied to each key word in turn.
// ---------------------------------------------------------------------------

namespace detail {
inline uint64_t mix64(uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}
} // namespace detail

inline uint64_t counter_hash(uint64_t seed, uint64_t k1, uint64_t k2 = 0, uint64_t k3 = 0) {
    uint64_t h = detail::mix64(seed);
    h = detail::mix64(h ^ k1);
    h = detail::mix64(h ^ k2);
    h = detail::mix64(h ^ k3);
    return h;
}

/// Uniform double in [0, 1) from 53 random bits.
inline double u64_to_unit(uint64_t x) {
    return static_cast<double>(x >> 11) * 0x1.0p-53;
}

/// Sequential deterministic RNG (SplitMix64). Used where a plain stream is
/// enough; simulation code uses counter_hash directly for per-trial substreams.
class Rng {
  public:
    explicit Rng(uint64_t seed) : state_(seed) {}

    uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double uniform() { return u64_to_unit(next_u64()); }

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n).
    uint64_t below(uint64_t n) { return next_u64() % n; }

  private:
    uint64_t state_;
};

// ---------------------------------------------------------------------------
// FNV-1a 64-bit digest, used for run-manifest input digests.
// ---------------------------------------------------------------------------
inline uint64_t fnv1a64(const void* data, size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    uint64_t h = 0xcbf29ce484222325ULL;
    for (size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline uint64_t fnv1a64(const std::string& s) { return fnv1a64(s.data(), s.size()); }

// ---------------------------------------------------------------------------
// Logging. Level comes from the ORO_LOG environment variable
// (error < info < debug); default is error.
// ---------------------------------------------------------------------------

enum class LogLevel { Error = 0, Info = 1, Debug = 2 };

LogLevel log_level();

void log_message(LogLevel lvl, const std::string& msg);

inline void log_error(const std::string& msg) { log_message(LogLevel::Error, msg); }
inline void log_info(const std::string& msg) { log_message(LogLevel::Info, msg); }
inline void log_debug(const std::string& msg) { log_message(LogLevel::Debug, msg); }

/// Formats a double with enough digits to round-trip, C locale, decimal point.
std::string fmt_double(double x);

} // namespace oro

#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace dynet {

/// Counter-based pseudo-random stream built on the splitmix64 finalizer.
///
/// A stream is identified by (seed, stream_id); identical identifiers replay
/// identical draw sequences and distinct stream ids give statistically
/// independent streams, so replicas and restarts can derive their own streams
/// without coordination.
class RngStream {
  public:
    using result_type = std::uint64_t;

    RngStream(std::uint64_t seed, std::uint64_t stream_id)
        : seed_(seed), stream_id_(stream_id) {
        state_ = mix(mix(seed + 0x9e3779b97f4a7c15ULL) ^ mix(stream_id + 0x1234567898765432ULL));
    }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_id_; }

    /// Child stream; child ids partition the id space deterministically.
    RngStream derive(std::uint64_t child) const {
        return RngStream(seed_, mix(stream_id_ ^ mix(child + 0xabcdef1234567890ULL)));
    }

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix(state_);
    }

    // UniformRandomBitGenerator interface
    std::uint64_t operator()() { return next_u64(); }
    static constexpr std::uint64_t min() { return 0; }
    static constexpr std::uint64_t max() { return std::numeric_limits<std::uint64_t>::max(); }

    /// Uniform double in [0, 1) with 53 random bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform double in (0, 1].
    double next_double_open0() { return 1.0 - next_double(); }

    double next_exponential(double rate) { return -std::log(next_double_open0()) / rate; }

    /// Standard normal via Box-Muller (one value per call; no hidden state).
    double next_normal() {
        double u = next_double_open0();
        double v = next_double();
        return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * M_PI * v);
    }

    /// Uniform integer in [0, n).
    std::uint64_t next_below(std::uint64_t n) {
        // multiply-shift; bias is < 2^-64 * n, irrelevant at simulation scales
        unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * n;
        return static_cast<std::uint64_t>(m >> 64);
    }

  private:
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::uint64_t state_;
};

}  // namespace dynet

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace cxk {

/// SplitMix64 (Steele, Lea & Flood 2014). The whole state is one 64-bit
/// counter advanced by the golden-ratio increment, and each output is a fixed
/// bijective mix of that counter, so a stream is a pure function of its seed
/// and reproduces bit-for-bit on any platform or language that implements the
/// same 20 lines.
class SplitMix64 {
public:
    static constexpr const char* kName = "splitmix64";

    explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    std::uint64_t next() noexcept {
        state_ += 0x9E3779B97F4A7C15ULL;
        return mix(state_);
    }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

    /// Standard normal via the basic Box-Muller transform; one variate per
    /// call (the sine branch is discarded) so the stream position is simple
    /// to reason about.
    double normal() noexcept {
        const double u1 = 1.0 - uniform();  // (0, 1]
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t state_;
};

/// Seed of an independent sub-stream `stream` of `seed`.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
    return SplitMix64::mix(seed ^ SplitMix64::mix(stream + 0x632BE59BD9B4E019ULL));
}

// Stream tags used by the generators in this library.
namespace streams {
inline constexpr std::uint64_t kNetwork = 1;
inline constexpr std::uint64_t kFrequencies = 2;
inline constexpr std::uint64_t kPhases = 3;
inline constexpr std::uint64_t kModuli = 4;
}  // namespace streams

}  // namespace cxk

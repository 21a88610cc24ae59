#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <utility>

namespace dlfm {

/// SplitMix64: 64-bit state, one multiply-xorshift output per step.
/// Distributions below are hand-rolled so sequences are identical on every
/// standard library.
class SplitMix64 {
public:
    using result_type = std::uint64_t;

    explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Independent generator for substream `index` of `seed`; results do not
    /// depend on which thread consumes which substream.
    static SplitMix64 substream(std::uint64_t seed, std::uint64_t index) noexcept;

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
    /// Uniform integer in [0, n), n >= 1 (rejection sampling, unbiased).
    std::uint64_t below(std::uint64_t n) noexcept;
    /// Standard normal (Box-Muller, one draw per call).
    double normal() noexcept;

private:
    std::uint64_t state_;
};

/// Fisher-Yates shuffle driven by SplitMix64::below.
template <typename T>
void shuffle(std::span<T> items, SplitMix64& rng) {
    for (std::size_t i = items.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng.below(i));
        std::swap(items[i - 1], items[j]);
    }
}

}  // namespace dlfm

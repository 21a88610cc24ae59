#include "dlfm/rng.hpp"

#include <cmath>
#include <numbers>

namespace dlfm {

SplitMix64 SplitMix64::substream(std::uint64_t seed, std::uint64_t index) noexcept {
    SplitMix64 mix(seed ^ (0xD1B54A32D192ED03ull * (index + 1)));
    return SplitMix64(mix());
}

std::uint64_t SplitMix64::below(std::uint64_t n) noexcept {
    const std::uint64_t limit = max() - max() % n;
    for (;;) {
        const std::uint64_t v = (*this)();
        if (v < limit) return v % n;
    }
}

double SplitMix64::normal() noexcept {
    double u = uniform();
    while (u <= 0.0) u = uniform();
    const double v = uniform();
    return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::numbers::pi * v);
}

}  // namespace dlfm

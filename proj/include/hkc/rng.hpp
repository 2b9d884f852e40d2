#pragma once

#include <cstdint>
#include <initializer_list>
#include <limits>

namespace hkc {

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/**
 * SplitMix64 generator. Satisfies UniformRandomBitGenerator, so it plugs
 * into <random> distributions.
 *
 * Streams are derived from a run seed plus a key path (round, node,
 * bucket, ...), never from evaluation order, which is what makes parallel
 * node handlers reproducible.
 */
class Rng {
public:
    using result_type = std::uint64_t;

    explicit constexpr Rng(std::uint64_t state = 0) noexcept : state_(state) {}

    static constexpr Rng keyed(std::uint64_t seed, std::initializer_list<std::uint64_t> keys) noexcept {
        std::uint64_t h = mix64(seed ^ 0x6a09e667f3bcc909ULL);
        for (auto k : keys) {
            h = mix64(h ^ mix64(k + 0x9e3779b97f4a7c15ULL));
        }
        return Rng(h);
    }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    constexpr result_type operator()() noexcept {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix64(state_);
    }

    // Uniform double in [0, 1).
    double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, bound), bound > 0. Lemire's method with rejection.
    std::uint64_t below(std::uint64_t bound) noexcept {
        auto m = static_cast<unsigned __int128>((*this)()) * bound;
        auto low = static_cast<std::uint64_t>(m);
        if (low < bound) {
            const std::uint64_t threshold = (0 - bound) % bound;
            while (low < threshold) {
                m = static_cast<unsigned __int128>((*this)()) * bound;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

private:
    std::uint64_t state_;
};

} // namespace hkc

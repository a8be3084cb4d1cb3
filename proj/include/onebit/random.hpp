#pragma once

// Reproducible per-trial random streams.
//
// A stream is xoshiro256** whose 256-bit state is derived from
// (master seed, hypothesis, trial index) through chained splitmix64
// finalizers. The finalizer is a bijection on 64-bit words, so the initial
// state is an injective function of the key, and the xoshiro transition is
// itself bijective: distinct keys never share a state sequence. Every draw depends
// only on the key, never on which worker ran the trial or in what order.

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string_view>

namespace onebit {

inline constexpr std::string_view kRngScheme =
    "xoshiro256**/splitmix64-chained(seed,hypothesis,trial);box-muller";

constexpr std::uint64_t splitmix64_mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class RandomStream {
public:
    using result_type = std::uint64_t;

    /// Keyed construction; see seed_for_trial in montecarlo.hpp.
    RandomStream(std::uint64_t seed, std::uint64_t tag, std::uint64_t index) noexcept {
        constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
        // Chained so that state_[0] fixes seed, then state_[2] fixes tag and
        // state_[3] fixes index. state_[1], which alone drives the first
        // output, is derived last and depends on all three.
        state_[0] = splitmix64_mix(seed + kGolden);
        state_[2] = splitmix64_mix(state_[0] ^ splitmix64_mix(tag + 2 * kGolden));
        state_[3] = splitmix64_mix(state_[2] ^ splitmix64_mix(index + 3 * kGolden));
        state_[1] = splitmix64_mix(state_[3] + 4 * kGolden);
        if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = kGolden;
    }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept { return next(); }

    result_type next() noexcept {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform on (0, 1): 53 random bits, offset by half an ulp so 0 is never returned.
    double uniform() noexcept {
        return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller; the second variate of each pair is cached.
    double normal() noexcept {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double radius = std::sqrt(-2.0 * std::log(uniform()));
        const double angle = 2.0 * std::numbers::pi * uniform();
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
        return (x << k) | (x >> (64 - k));
    }

    std::array<std::uint64_t, 4> state_{};
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace onebit

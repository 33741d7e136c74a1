#pragma once

#include <cstdint>

namespace pglab::rng {

// Seed used by every CLI subcommand when none is given, so bare invocations
// are reproducible.
inline constexpr std::uint64_t default_seed = 0xC0FFEE;

// splitmix64 avalanche. Full-period bijection on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Documented substream derivation: fold each argument into the running hash
// with h = mix64(h ^ mix64(arg + k)) where k counts arguments from 1.
// Distinct argument tuples give distinct streams (collision-checked in tests).
constexpr std::uint64_t hash64(std::uint64_t h) { return mix64(h); }

template <class... Rest>
constexpr std::uint64_t hash64(std::uint64_t h, std::uint64_t a, Rest... rest) {
    std::uint64_t k = sizeof...(Rest) + 1;
    return hash64(mix64(h ^ mix64(a + k)), rest...);
}

// Counter-based stream: splitmix64 over an incrementing state. Streams built
// from hash64 of (seed, tags...) are independent for all practical purposes
// and never share state, so replications can run on any schedule.
class Stream {
public:
    explicit Stream(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ull;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1), 53-bit resolution.
    double next_unit() { return double(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in [lo, hi).
    double next_range(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

private:
    std::uint64_t state_;
};

template <class... Tags>
Stream stream_for(std::uint64_t seed, Tags... tags) {
    return Stream(hash64(seed, static_cast<std::uint64_t>(tags)...));
}

// Beta(a, b) deviate for small integer shapes, via the order statistic:
// the a-th smallest of a+b-1 uniforms. Exact and allocation-free.
double beta_int(Stream& s, int a, int b);

} // namespace pglab::rng

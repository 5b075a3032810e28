#pragma once

#include <cmath>
#include <cstdint>

namespace rmt {

// Counter-based generator: SplitMix64 run in counter mode.
//
// Output i of the stream with key k is mix64(k + (i+1)*GAMMA), so any
// element of any stream can be computed independently of the others.
// Streams are keyed by hashing (seed, a, b) tuples; the constants below
// are the published SplitMix64 increment and finalizer multipliers, so
// sequences are bit-identical on every platform with 64-bit integers.
class CounterRng {
public:
    static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

    static constexpr std::uint64_t mix64(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Hash a (seed, a, b) triple into a stream key. Feeding each word
    // through the finalizer keeps nearby indices decorrelated.
    static constexpr std::uint64_t derive_key(std::uint64_t seed,
                                              std::uint64_t a = 0,
                                              std::uint64_t b = 0) {
        std::uint64_t k = mix64(seed ^ 0x8E1FDE23D6A9B0C5ULL);
        k = mix64(k ^ (a + kGamma));
        k = mix64(k ^ (b + 2 * kGamma));
        return k;
    }

    explicit CounterRng(std::uint64_t key) : key_(key), counter_(0) {}
    CounterRng(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0)
        : CounterRng(derive_key(seed, a, b)) {}

    std::uint64_t next_u64() { return mix64(key_ + (++counter_) * kGamma); }

    // 53-bit uniform in [0, 1)
    double next_double() { return double(next_u64() >> 11) * 0x1.0p-53; }

    // uniform in the open interval (0, 1); safe as a log() argument
    double next_open_double() {
        return (double(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    // Box-Muller; consumes exactly two uniforms per call.
    double next_gaussian() {
        const double u = next_open_double();
        const double v = next_double();
        return std::sqrt(-2.0 * std::log(u)) * std::cos(6.283185307179586477 * v);
    }

    std::uint64_t counter() const { return counter_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_;
};

} // namespace rmt

#pragma once

#include <cstdint>

namespace penlevel {

// Name pinned into report output; see ExperimentReport JSON.
inline constexpr const char* kRngName = "splitmix64-1.0";

namespace rng {

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

// splitmix64 finalizer (Vigna 2015, public domain reference code).
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Derives an independent stream seed from (seed, tag).
inline std::uint64_t substream(std::uint64_t seed, std::uint64_t tag) {
    return mix64(seed ^ mix64(tag + kGolden));
}

}  // namespace rng

using rng::mix64;
using rng::substream;

// splitmix64 driven as a pure counter: output k of a stream is
// mix64(seed + (k+1)*golden). Any position is addressable directly, so
// work split across threads by counter ranges reproduces the serial
// stream bit for bit.
class CounterRng {
  public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t counter = 0)
        : seed_(seed), counter_(counter) {}

    std::uint64_t next_u64() {
        return rng::mix64(seed_ + (++counter_) * rng::kGolden);
    }

    // Uniform on the open interval (0,1): 53-bit mantissa offset by half an ulp.
    double next_uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    // Standard normal via inverse CDF; one uniform per deviate.
    double next_normal();

    // Poisson(mean) deviate. Multiplication method below mean 10,
    // Hormann's PTRS transformed rejection above.
    long next_poisson(double mean);

    std::uint64_t counter() const { return counter_; }

  private:
    std::uint64_t seed_;
    std::uint64_t counter_;
};

}  // namespace penlevel

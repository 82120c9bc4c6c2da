#pragma once

#include <cstdint>

namespace fermat {

// Counter-based generator in the splitmix64 family.  Each draw applies the
// splitmix64 finalizer to key + counter * golden-ratio increment, where the
// key is derived from (seed, stream).  Stream splitting: distinct stream
// indices under the same seed give statistically independent sequences, so
// replicate-parallel experiments draw from CounterRng(seed, replicate)
// without coordination.  All state is two 64-bit words; output depends only
// on (seed, stream, counter), which is what makes runs reproducible
// bit-for-bit.
class CounterRng {
  public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
        : key_(derive_key(seed, stream)) {}

    std::uint64_t next_u64() {
        counter_ += 0x9E3779B97F4A7C15ULL;
        return mix(key_ ^ counter_);
    }

    // Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Integer in [0, n).
    std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

    // Standard normal via Box-Muller (two uniforms per call, no cached spare:
    // call count stays in lockstep with the counter).
    double normal();

    // Poisson by summing unit exponentials; exact for any mean at desk scale.
    std::uint64_t poisson(double mean);

  private:
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
    static std::uint64_t derive_key(std::uint64_t seed, std::uint64_t stream) {
        return mix(mix(seed + 0x9E3779B97F4A7C15ULL) ^ mix(stream * 0xD1342543DE82EF95ULL + 1));
    }

    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace fermat

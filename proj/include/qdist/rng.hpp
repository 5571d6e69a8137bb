#pragma once

#include <cstdint>

namespace qdist {

// Counter-based generator built on the SplitMix64 finalizer, so seeded runs
// replay identically across languages. Constants:
//   advance  0x9E3779B97F4A7C15
//   mix      0xBF58476D1CE4E5B9, 0x94D049BB133111EB, shifts 30/27/31
// Streams decorrelate by hashing the stream index with 0xD1B54A32D192ED03
// before mixing it into the seed hash.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
        : state_(mix(seed) ^ mix(stream + 0xD1B54A32D192ED03ull)) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ull;
        return mix(state_);
    }

    // uniform in [0, 1)
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // standard normal via Box-Muller; pairs are cached
    double next_gaussian();

private:
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace qdist

#pragma once

// Counter-based random streams. Every draw is a pure function of
// (key, counter), so substreams for (seed, step, member) triples can be
// derived without sharing state and the seed -> output mapping is
// bit-reproducible on a given platform regardless of evaluation order.

#include <cstdint>

#include "rds/types.hpp"

namespace rds {

// SplitMix64 finalizer.
inline std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
}

// Derives an independent stream key from a parent key and an index.
inline std::uint64_t subkey(std::uint64_t key, std::uint64_t index) {
    return mix64(key + 0x9E3779B97F4A7C15ull * (index + 1));
}

inline std::uint64_t subkey(std::uint64_t key, std::uint64_t a, std::uint64_t b) {
    return subkey(subkey(key, a), b);
}

// Keyed counter generator. uniform(i) and normal(i) are stateless functions
// of the counter; normal(i) consumes the uniform pair (2i, 2i+1) through the
// Box-Muller transform (cosine branch).
class CounterRng {
  public:
    explicit CounterRng(std::uint64_t key) : key_(key) {}

    // Uniform on (0, 1]; never returns 0 so log() is safe.
    double uniform(std::uint64_t counter) const {
        const std::uint64_t bits = mix64(key_ + 0x9E3779B97F4A7C15ull * (counter + 1)) >> 11;
        return static_cast<double>(bits + 1) * 0x1.0p-53;
    }

    double normal(std::uint64_t counter) const;

  private:
    std::uint64_t key_;
};

// Sequential view over a CounterRng for callers that just need the next draw.
class NormalStream {
  public:
    explicit NormalStream(std::uint64_t key) : rng_(key) {}

    double next() { return rng_.normal(next_++); }

    Vector take(Index n) {
        Vector v(n);
        for (Index i = 0; i < n; ++i) v[i] = next();
        return v;
    }

  private:
    CounterRng rng_;
    std::uint64_t next_ = 0;
};

}  // namespace rds

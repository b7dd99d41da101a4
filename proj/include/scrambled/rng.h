#pragma once

#include <cstdint>

namespace scrambled {

/// Counter-based generator: the n-th draw is a pure function of (key, n).
///
/// Draws are the SplitMix64 finalizer applied to key + n * golden-gamma, so
/// independent streams are obtained by deriving keys with `derive_key`
/// instead of sharing a sequential state between threads.
class CounterRng {
   public:
    explicit CounterRng(uint64_t key, uint64_t counter = 0) : key_(key), counter_(counter) {}

    uint64_t next_u64();
    /// Uniform double in the open interval (0, 1).
    double uniform();
    /// Standard normal via Box-Muller; the second variate of each pair is cached.
    double normal();

    uint64_t key() const { return key_; }
    uint64_t counter() const { return counter_; }

    static uint64_t mix(uint64_t z);
    /// Key of the `index`-th substream of `seed`.
    static uint64_t derive_key(uint64_t seed, uint64_t index);

   private:
    uint64_t key_;
    uint64_t counter_;
    double cached_normal_ = 0.0;
    bool has_cached_normal_ = false;
};

}  // namespace scrambled

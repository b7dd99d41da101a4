#include "scrambled/rng.h"

#include <cmath>
#include <numbers>

namespace scrambled {

namespace {
constexpr uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;
}

uint64_t CounterRng::mix(uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

uint64_t CounterRng::derive_key(uint64_t seed, uint64_t index) {
    return mix(mix(seed) ^ mix(index + 0x632BE59BD9B4E019ULL));
}

uint64_t CounterRng::next_u64() {
    ++counter_;
    return mix(key_ + counter_ * kGoldenGamma);
}

double CounterRng::uniform() {
    // 53 random mantissa bits, shifted off zero.
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double CounterRng::normal() {
    if (has_cached_normal_) {
        has_cached_normal_ = false;
        return cached_normal_;
    }
    double u1 = uniform();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double theta = 2.0 * std::numbers::pi * u2;
    cached_normal_ = r * std::sin(theta);
    has_cached_normal_ = true;
    return r * std::cos(theta);
}

}  // namespace scrambled

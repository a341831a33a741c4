#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace exlq::rng {

/// 64-bit finalizer (murmur3 variant). Bijective, well-mixed.
inline std::uint64_t mix(std::uint64_t x) {
    x ^= x >> 33;
    x *= 0xff51afd7ed558ccdULL;
    x ^= x >> 33;
    x *= 0xc4ceb9fe1a85ec53ULL;
    x ^= x >> 33;
    return x;
}

/// Counter-based generator: every draw is a pure function of
/// (seed, stream, counter), so parallel scheduling cannot change results.
inline std::uint64_t hash3(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
    std::uint64_t h = mix(seed ^ 0x9e3779b97f4a7c15ULL);
    h = mix(h ^ (stream + 0xbf58476d1ce4e5b9ULL));
    h = mix(h ^ (counter + 0x94d049bb133111ebULL));
    return h;
}

/// Uniform draw in the open interval (0, 1).
inline double uniform01(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
    return (static_cast<double>(hash3(seed, stream, counter) >> 11) + 0.5) * 0x1.0p-53;
}

/// Standard normal via Box-Muller; consumes raw slots 2*counter and 2*counter+1.
inline double standard_normal(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
    const double u1 = uniform01(seed, stream, 2 * counter);
    const double u2 = uniform01(seed, stream, 2 * counter + 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

/// Stateful view over one logical stream. Each next_* call consumes one
/// counter slot; mixing uniform and normal draws stays collision-free.
class Stream {
public:
    Stream(std::uint64_t seed, std::uint64_t stream_id, std::uint64_t start = 0)
        : seed_(seed), id_(stream_id), counter_(start) {}

    double next_uniform() { return uniform01(seed_, id_, 2 * counter_++); }
    double next_normal() { return standard_normal(seed_, id_, counter_++); }

    std::uint64_t counter() const { return counter_; }

private:
    std::uint64_t seed_;
    std::uint64_t id_;
    std::uint64_t counter_;
};

/// Stream-id layout used across the library: a small kind tag keeps noise,
/// action, and auxiliary draws on disjoint streams per (scenario, path).
inline std::uint64_t stream_id(std::uint64_t kind, std::uint64_t scenario, std::uint64_t path) {
    return (kind << 56) | (scenario << 40) | path;
}

inline constexpr std::uint64_t kNoiseKind = 0;
inline constexpr std::uint64_t kActionKind = 1;
inline constexpr std::uint64_t kScenarioKind = 2;

} // namespace exlq::rng

#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

namespace sapt {

namespace detail {

// SplitMix64 output mix (Steele, Lea, Flood 2014).
inline std::uint64_t splitmix_mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

} // namespace detail

// Counter-based generator: SplitMix64 run in counter mode on a key derived
// from (root seed, purpose label, two stream indices).  Streams with distinct
// coordinates are independent for practical purposes, so work items keyed by
// logical indices (vertex, replicate) draw identical values regardless of
// thread scheduling.
class RngStream {
public:
    RngStream(std::uint64_t root_seed, std::string_view label,
              std::uint64_t idx0 = 0, std::uint64_t idx1 = 0) {
        std::uint64_t k = root_seed;
        k = detail::splitmix_mix(k ^ detail::fnv1a64(label));
        k = detail::splitmix_mix(k ^ (0x9e3779b97f4a7c15ULL * (idx0 + 1)));
        k = detail::splitmix_mix(k ^ (0xc2b2ae3d27d4eb4fULL * (idx1 + 1)));
        state_ = k;
    }

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return detail::splitmix_mix(state_);
    }

    // Uniform on [0,1) with 53 random bits.
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform on (0,1]; safe under log().
    double next_unit_open() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    // Unbiased integer in [0, n) by rejection.
    std::uint64_t next_below(std::uint64_t n) {
        const std::uint64_t limit = (0 - n) % n; // 2^64 mod n
        for (;;) {
            const std::uint64_t x = next_u64();
            if (x >= limit) return x % n;
        }
    }

    // Box-Muller; consumes exactly two uniforms per variate.
    double next_gaussian() {
        const double u1 = next_unit_open();
        const double u2 = next_unit();
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * 3.14159265358979323846 * u2);
    }

    // Unit-rate exponential via -ln(1-U).
    double next_exponential() { return -std::log1p(-next_unit()); }

private:
    std::uint64_t state_;
};

// Key derivation alone, for callers that re-seed sub-engines.
inline std::uint64_t derive_seed(std::uint64_t root_seed, std::string_view label,
                                 std::uint64_t idx0 = 0, std::uint64_t idx1 = 0) {
    std::uint64_t k = root_seed;
    k = detail::splitmix_mix(k ^ detail::fnv1a64(label));
    k = detail::splitmix_mix(k ^ (0x9e3779b97f4a7c15ULL * (idx0 + 1)));
    k = detail::splitmix_mix(k ^ (0xc2b2ae3d27d4eb4fULL * (idx1 + 1)));
    return k;
}

} // namespace sapt

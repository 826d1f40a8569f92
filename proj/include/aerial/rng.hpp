#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace aerial {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Derives an independent stream seed from (master seed, purpose tag, index).
/// Every random draw in the project flows from one master seed through here,
/// so runs are reproducible and sub-streams never alias.
inline std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t tag, std::uint64_t index = 0) {
    return splitmix64(splitmix64(seed ^ tag) + index);
}

namespace seed_tag {
constexpr std::uint64_t placement      = 0x706C6163656D6E74ULL;
constexpr std::uint64_t virtual_users  = 0x76697274757372ULL;
constexpr std::uint64_t random_assign  = 0x726E64617373676EULL;
constexpr std::uint64_t monte_carlo    = 0x6D635F73747265ULL;
constexpr std::uint64_t redraw         = 0x726564726177ULL;
}  // namespace seed_tag

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_range(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(rng);
}

/// Exponential with the given mean; avoids log(0) since 1-u is in (0, 1].
inline double sample_exponential(std::mt19937_64& rng, double mean) {
    return -mean * std::log(1.0 - uniform01(rng));
}

/// Gamma(shape m integer, mean total_mean) as a sum of m exponentials.
/// Deterministic across platforms, unlike std::gamma_distribution.
inline double sample_gamma_int(std::mt19937_64& rng, int m, double total_mean) {
    double scale = total_mean / m;
    double sum = 0.0;
    for (int i = 0; i < m; ++i) sum += sample_exponential(rng, scale);
    return sum;
}

/// |N(0,1)| via Box-Muller; consumes exactly two uniforms per call.
inline double sample_half_normal(std::mt19937_64& rng) {
    double u1 = 1.0 - uniform01(rng);
    double u2 = uniform01(rng);
    return std::abs(std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2));
}

}  // namespace aerial

// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 burstid contributors

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace burstid {

// Counter-based draws: the value depends only on (seed, stream, index), so
// re-rendering a sample at another tuning reuses the same noise realization.
inline std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t hash_key(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) noexcept {
    return splitmix64(splitmix64(splitmix64(seed) ^ stream) ^ index);
}

// Uniform in (0, 1).
inline double hash_uniform(std::uint64_t key) noexcept {
    return (static_cast<double>(key >> 11) + 0.5) * 0x1.0p-53;
}

inline double hash_normal(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) noexcept {
    const double u1 = hash_uniform(hash_key(seed, stream, 2 * index));
    const double u2 = hash_uniform(hash_key(seed, stream, 2 * index + 1));
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

namespace stream {
inline constexpr std::uint64_t noise = 1;
inline constexpr std::uint64_t cca = 2;
inline constexpr std::uint64_t bench = 3;
inline constexpr std::uint64_t bench_noise = 4;
}  // namespace stream

}  // namespace burstid

#pragma once

#include "qd/expr.hpp"
#include "qd/shape.hpp"

#include <cstdint>
#include <random>

namespace qd {

namespace detail {
// splitmix64 finalizer; keeps seeding stable across platforms
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}
} // namespace detail

/// Deterministic sample point for (shape, seed, attempt): numerators in
/// [-10^6, 10^6], denominators in [1, 10^3]. Identical inputs give identical
/// points on every platform; the raw engine output is reduced by modulus
/// rather than through a distribution object.
inline Point random_point(const ModelShape& shape, std::uint64_t seed, std::uint32_t attempt) {
    std::uint64_t s = detail::mix64(seed);
    s = detail::mix64(s ^ (0x1000193ULL * attempt + 1));
    s = detail::mix64(s ^ (static_cast<std::uint64_t>(shape.m) << 40) ^
                      (static_cast<std::uint64_t>(shape.n) << 20) ^
                      static_cast<std::uint64_t>(shape.r));
    std::mt19937_64 eng(s);

    Point p;
    p.m = shape.m;
    p.n = shape.n;
    p.values.reserve(static_cast<std::size_t>(shape.registry_size()));
    for (int i = 0; i < shape.registry_size(); ++i) {
        long num = static_cast<long>(eng() % 2000001ULL) - 1000000;
        long den = static_cast<long>(eng() % 1000ULL) + 1;
        p.values.emplace_back(num, den);
    }
    return p;
}

} // namespace qd

#pragma once

#include <cstdint>
#include <limits>
#include <random>

namespace hetlb {

/// Uniform draw in [0, n) from a 64-bit Mersenne Twister by rejection, so
/// the sequence is fixed by the seed on every platform (the standard pins
/// mt19937_64 output but not uniform_int_distribution's mapping).
inline std::uint64_t draw_below(std::mt19937_64& rng, std::uint64_t n) {
    if (n <= 1)
        return 0;
    constexpr auto max = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t limit = max - max % n;
    for (;;) {
        std::uint64_t v = rng();
        if (v < limit)
            return v % n;
    }
}

/// Uniform draw in [lo, hi].
inline std::int64_t draw_between(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(draw_below(rng, static_cast<std::uint64_t>(hi - lo) + 1));
}

} // namespace hetlb

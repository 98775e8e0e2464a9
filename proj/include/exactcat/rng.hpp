// Deterministic pseudo-random source for sampling. Not std::mt19937 +
// distributions on purpose: distribution output is implementation-defined,
// and seeded runs here must byte-reproduce everywhere.
#pragma once

#include <cstdint>
#include <vector>

#include "exactcat/intlin.hpp"

namespace exactcat {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    // splitmix64 step.
    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform-ish integer in [lo, hi]; modulo bias is irrelevant at the
    /// tiny ranges used here.
    long pick(long lo, long hi) {
        if (hi <= lo) return lo;
        return lo + static_cast<long>(next() % static_cast<std::uint64_t>(hi - lo + 1));
    }

    Int pick_int(long lo, long hi) { return Int(pick(lo, hi)); }

    bool chance(int percent) { return pick(0, 99) < percent; }

private:
    std::uint64_t state_;
};

}  // namespace exactcat

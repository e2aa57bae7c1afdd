#pragma once

#include <cstdint>
#include <random>

namespace quanv {

// Deterministic random source used everywhere randomness is needed
// (circuit generation, weight init, shuffling, dropout masks).
//
// The engine is std::mt19937_64, whose output sequence is pinned by the
// C++ standard, and all value mappings below are implemented by hand so
// that identical seeds give bit-identical results on any platform.
// std::uniform_*_distribution is never used: its mapping is
// implementation-defined.
class Rng {
public:
    static constexpr const char* algorithm = "mt19937_64";

    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    /// Uniform double in [0, 1) with 53 random bits.
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

    /// Uniform integer in [0, n). Uses plain modulo; for the n used here
    /// (at most dataset sizes, ~2^16) the bias is below 2^-47 and the
    /// mapping is stable across platforms.
    std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

    /// Fair coin from the low bit.
    bool coin() { return (next_u64() & 1u) != 0; }

private:
    std::mt19937_64 gen_;
};

} // namespace quanv

#pragma once

#include <cstdint>
#include <random>

namespace cbt {

// Finalizer of splitmix64. Used for all seed derivation so that streams
// built from nearby seeds stay decorrelated.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

inline std::uint64_t combine_seed(std::uint64_t a, std::uint64_t b) {
    return mix64(a ^ mix64(b));
}

/// Seed of run `run` inside grid cell `cell` under `master`. Pure; the
/// byte-identical-output contract of the experiment harness rests on it.
inline std::uint64_t derive_run_seed(std::uint64_t master, std::uint64_t cell,
                                     std::uint64_t run) {
    return combine_seed(combine_seed(master, 0x9d2c5680ull ^ cell), run);
}

/// Deterministic uniform stream. One instance per stochastic action, so a
/// sibling being gated never shifts another action's draws.
///
/// Doubles are produced by the usual 53-bit mantissa trick instead of
/// std::uniform_real_distribution, whose output is implementation-defined.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : gen_(seed) {}

    double uniform01() { return double(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Uniform draw on [-halfwidth, halfwidth].
    double symmetric(double halfwidth) { return uniform(-halfwidth, halfwidth); }

private:
    std::mt19937_64 gen_;
};

}  // namespace cbt

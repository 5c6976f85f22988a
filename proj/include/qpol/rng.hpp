// rng.hpp
// Deterministic randomness with hierarchical seed derivation. Stochastic code
// never shares one generator across samples; each sample derives its own
// child from (master seed, purpose tag, index), so aggregates do not depend
// on evaluation order.

#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace qpol {

class RandomSource {
public:
    explicit RandomSource(std::uint64_t seed);

    // Pure function of (stored seed, tag, index); does not consume this
    // generator's stream.
    RandomSource child(std::string_view tag, std::uint64_t index) const;

    std::uint64_t next_u64();

    // Uniform on [0, 1), 53-bit resolution. Never returns 1.0.
    double uniform();

    // Standard normal via Box-Muller on the uniform stream.
    double normal();

    std::uint64_t seed() const { return seed_; }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

// splitmix64 finalizer; the seed-mixing primitive behind child().
std::uint64_t mix64(std::uint64_t x);

}  // namespace qpol

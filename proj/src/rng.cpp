#include "qpol/rng.hpp"

#include <cmath>
#include <numbers>

namespace qpol {

namespace {

std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace

std::uint64_t mix64(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ull;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBull;
    x ^= x >> 31;
    return x;
}

RandomSource::RandomSource(std::uint64_t seed) : seed_(seed), engine_(seed) {}

RandomSource RandomSource::child(std::string_view tag, std::uint64_t index) const {
    std::uint64_t base = mix64(seed_ ^ fnv1a64(tag));
    return RandomSource(mix64(base + 0x9E3779B97F4A7C15ull * (index + 1)));
}

std::uint64_t RandomSource::next_u64() {
    return engine_();
}

double RandomSource::uniform() {
    // Top 53 bits; exact dyadic rational in [0, 1).
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RandomSource::normal() {
    double u1 = uniform();
    double u2 = uniform();
    // 1 - u1 > 0 always, so the log is finite.
    return std::sqrt(-2.0 * std::log(1.0 - u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace qpol

#pragma once

#include <cstdint>
#include <random>

#include "nccell/gf.hpp"

namespace nccell {

using Rng = std::mt19937_64;

// SplitMix64 finalizer; used to derive well-separated seeds for substreams.
inline std::uint64_t mix_seed(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

/// Independent generator for worker/stream `stream` of a master seed.
inline Rng substream(std::uint64_t master, std::uint64_t stream) {
    return Rng(mix_seed(mix_seed(master) ^ mix_seed(stream + 0x51EDull)));
}

inline Element random_element(const Field& f, Rng& rng) {
    return static_cast<Element>(std::uniform_int_distribution<std::uint32_t>(0, f.order() - 1)(rng));
}

inline Element random_nonzero(const Field& f, Rng& rng) {
    return static_cast<Element>(std::uniform_int_distribution<std::uint32_t>(1, f.order() - 1)(rng));
}

inline FieldVector random_vector(const Field& f, std::size_t len, Rng& rng) {
    FieldVector v(len);
    for (auto& e : v) e = random_element(f, rng);
    return v;
}

inline bool bernoulli(double p, Rng& rng) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p;
}

}  // namespace nccell

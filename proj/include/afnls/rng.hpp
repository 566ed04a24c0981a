#pragma once

#include <cstdint>

#include "afnls/grid.hpp"

namespace afnls {

// Counter-based stream: draw(seed, stream, k) = splitmix64 of a key mixed from
// the three integers. Streams split by index; no state is carried.
std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t draw(std::uint64_t seed, std::uint64_t stream, std::uint64_t k);
// Uniform on [0, 1) with 53 random bits.
double uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t k);

// Smooth random field: Gaussian envelope exp(-(x/wx)^2 - (y/wy)^2) times a
// random trigonometric polynomial with `modes` frequencies per axis.
Field random_field(const GridSpec& g, std::uint64_t seed, std::uint64_t stream, int modes = 3);

}  // namespace afnls

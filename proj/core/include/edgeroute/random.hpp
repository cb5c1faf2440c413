#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace edgeroute {

// Portable draws on top of mt19937_64. The standard distributions are
// implementation-defined, which would make traces differ across toolchains.

/// Uniform on [0, 1) with 53 bits of resolution.
double uniform01(std::mt19937_64& rng) noexcept;

/// Uniform integer on [0, bound). `bound` must be positive.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) noexcept;

template <typename T>
void shuffle(std::span<T> items, std::mt19937_64& rng) noexcept {
  for (std::size_t i = items.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(uniform_below(rng, i));
    std::swap(items[i - 1], items[j]);
  }
}

}  // namespace edgeroute

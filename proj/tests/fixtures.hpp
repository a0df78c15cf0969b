#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "tanglekit/core.hpp"

namespace fixture {

using namespace tanglekit;

// Up to m distinct random nontrivial separations of an n-point set.
inline SystemPtr random_system(std::size_t n, std::size_t m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<PointSet> sides;
  const std::uint64_t full = (std::uint64_t{1} << n) - 1;
  for (std::size_t tries = 0; sides.size() < m && tries < 1000; ++tries) {
    const std::uint64_t w = rng() & full;
    if (w == 0 || w == full) continue;
    sides.push_back(PointSet::from_word(n, w));
  }
  return make_system(GroundSet::make(n), sides).system;
}

inline std::vector<PointSet> big_sides(const Tangle& t) {
  return {t.big_sides().begin(), t.big_sides().end()};
}

inline std::vector<PointSet> canonical_sides(const SeparationSystem& s) {
  return {s.separations().begin(), s.separations().end()};
}

}  // namespace fixture

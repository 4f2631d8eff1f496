#pragma once

// Hand-rolled generators for the property tests. Every suite seeds its own
// engine so failures reproduce.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "accretia/banach.hpp"

namespace accretia::gen {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline std::size_t uniform_index(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

/// Coordinates with a random overall scale spanning several decades, and
/// occasional exact zeros.
inline Vector gen_vector(Rng& rng, std::size_t dim) {
  const double scale = std::pow(10.0, uniform(rng, -3.0, 3.0));
  std::vector<double> c(dim);
  for (auto& v : c) v = uniform_index(rng, 0, 9) == 0 ? 0.0 : scale * uniform(rng, -1.0, 1.0);
  return Vector(std::move(c));
}

/// Vector with every coordinate in [-r, r].
inline Vector gen_box(Rng& rng, std::size_t dim, double r) {
  std::vector<double> c(dim);
  for (auto& v : c) v = uniform(rng, -r, r);
  return Vector(std::move(c));
}

inline Vector gen_in_ball(Rng& rng, const SpaceInstance& space, double radius) {
  for (;;) {
    Vector v = gen_box(rng, space.dim(), 1.0);
    const double n = norm(space, v);
    if (n > 1e-12) return (radius * std::pow(uniform(rng, 0.0, 1.0), 1.0 / space.dim()) / n) * v;
  }
}

inline double gen_exponent(Rng& rng) {
  const double choices[] = {1.1, 1.5, 2.0, 3.0, 4.0, 7.5};
  return choices[uniform_index(rng, 0, std::size(choices) - 1)];
}

}  // namespace accretia::gen

#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "accretia/banach.hpp"

namespace accretia::detail {

using Rng = std::mt19937_64;

inline Vector random_vector(Rng& rng, std::size_t dim, double scale = 1.0) {
  std::normal_distribution<double> gauss(0.0, scale);
  std::vector<double> c(dim);
  for (auto& v : c) v = gauss(rng);
  return Vector(std::move(c));
}

/// Random point on the unit sphere of the given space.
inline Vector random_unit(Rng& rng, const SpaceInstance& space) {
  for (;;) {
    Vector v = random_vector(rng, space.dim());
    const double n = norm(space, v);
    if (n > 1e-12) return (1.0 / n) * v;
  }
}

/// Geometric grid hi, hi/2, ..., with `count` points.
inline std::vector<double> halving_grid(double hi, std::size_t count) {
  std::vector<double> g;
  g.reserve(count);
  for (std::size_t i = 0; i < count; ++i) g.push_back(std::ldexp(hi, -static_cast<int>(i)));
  return g;
}

}  // namespace accretia::detail

#include "accretia/banach.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sampling.hpp"

namespace accretia {

namespace {

void require_finite(std::span<const double> c) {
  for (double v : c)
    if (!std::isfinite(v)) throw std::invalid_argument("Vector: non-finite coordinate");
}

void require_same_dim(const Vector& a, const Vector& b) {
  if (a.dim() != b.dim())
    throw std::invalid_argument("Vector: dimension mismatch (" + std::to_string(a.dim()) +
                                " vs " + std::to_string(b.dim()) + ")");
}

}  // namespace

Vector::Vector(std::size_t dim, double fill) : coords_(dim, fill) {
  require_finite(coords_);
}

Vector::Vector(std::vector<double> coords) : coords_(std::move(coords)) {
  require_finite(coords_);
}

Vector::Vector(std::initializer_list<double> coords) : coords_(coords) {
  require_finite(coords_);
}

bool Vector::is_finite() const noexcept {
  return std::all_of(coords_.begin(), coords_.end(), [](double v) { return std::isfinite(v); });
}

bool Vector::is_zero() const noexcept {
  return std::all_of(coords_.begin(), coords_.end(), [](double v) { return v == 0.0; });
}

Vector& Vector::operator+=(const Vector& other) {
  require_same_dim(*this, other);
  for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] += other.coords_[i];
  return *this;
}

Vector& Vector::operator-=(const Vector& other) {
  require_same_dim(*this, other);
  for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] -= other.coords_[i];
  return *this;
}

Vector& Vector::operator*=(double s) noexcept {
  for (auto& v : coords_) v *= s;
  return *this;
}

Vector axpy(const Vector& a, double s, const Vector& b) {
  require_same_dim(a, b);
  Vector out = a;
  for (std::size_t i = 0; i < a.dim(); ++i) out[i] += s * b[i];
  return out;
}

SmoothnessModulus hilbert_smoothness() {
  return {[](double eps) { return eps; }, "t"};
}

SpaceInstance::SpaceInstance(std::size_t dim, double p, std::optional<SmoothnessModulus> tau)
    : dim_(dim), p_(p), q_(p / (p - 1.0)), tau_(std::move(tau)) {
  if (dim == 0) throw std::invalid_argument("SpaceInstance: dimension must be positive");
  if (!(p > 1.0) || !std::isfinite(p))
    throw std::invalid_argument("SpaceInstance: exponent p must lie in (1, inf)");
  if (tau_ && !tau_->tau) throw std::invalid_argument("SpaceInstance: empty smoothness modulus");
}

SpaceInstance SpaceInstance::hilbert(std::size_t dim) {
  return SpaceInstance(dim, 2.0, hilbert_smoothness());
}

void SpaceInstance::require_dim(const Vector& x) const {
  if (x.dim() != dim_)
    throw std::invalid_argument("dimension mismatch: vector has " + std::to_string(x.dim()) +
                                " coordinates, space has " + std::to_string(dim_));
}

double lp_norm(std::span<const double> coords, double r) {
  double scale = 0.0;
  for (double v : coords) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return 0.0;
  double sum = 0.0;
  if (r == 2.0) {
    for (double v : coords) {
      const double t = v / scale;
      sum += t * t;
    }
    return scale * std::sqrt(sum);
  }
  for (double v : coords) sum += std::pow(std::abs(v) / scale, r);
  return scale * std::pow(sum, 1.0 / r);
}

double norm(const SpaceInstance& space, const Vector& x) {
  space.require_dim(x);
  return lp_norm(x.coords(), space.p());
}

double distance(const SpaceInstance& space, const Vector& x, const Vector& y) {
  return norm(space, x - y);
}

double dual_norm(const SpaceInstance& space, const Vector& j) {
  space.require_dim(j);
  return lp_norm(j.coords(), space.dual_exponent());
}

Vector duality_map(const SpaceInstance& space, const Vector& x) {
  const double n = norm(space, x);
  Vector j(space.dim());
  if (n == 0.0) return j;
  if (space.is_hilbert()) return x;
  // ||x||^(2-p) |x_i|^(p-1) rewritten as ||x|| (|x_i|/||x||)^(p-1) to avoid overflow.
  const double e = space.p() - 1.0;
  for (std::size_t i = 0; i < space.dim(); ++i) {
    const double a = std::abs(x[i]);
    if (a == 0.0) continue;
    j[i] = std::copysign(n * std::pow(a / n, e), x[i]);
  }
  return j;
}

double dual_pair(const SpaceInstance& space, const Vector& y, const Vector& j) {
  space.require_dim(y);
  space.require_dim(j);
  double s = 0.0;
  for (std::size_t i = 0; i < y.dim(); ++i) s += y[i] * j[i];
  return s;
}

InequalityCheck check_subdiff_inequality(const SpaceInstance& space, const Vector& x,
                                         const Vector& y) {
  const Vector sum = x + y;
  const double lhs = std::pow(norm(space, sum), 2);
  const double rhs = std::pow(norm(space, x), 2) + 2.0 * dual_pair(space, y, duality_map(space, sum));
  const double slack = rhs - lhs;
  const double tol = kIdentitySlack * (1.0 + std::abs(lhs) + std::abs(rhs));
  return {slack >= -tol, slack};
}

double omega_tau(const SmoothnessModulus& tau, double d, double eps) {
  if (!(d > 0.0) || !(eps > 0.0))
    throw std::invalid_argument("omega_tau: d and eps must be positive");
  d = std::max(d, 1.0);
  eps = std::min(eps, 2.0);
  return eps * eps / (12.0 * d) * tau(eps / (2.0 * d));
}

SmoothnessReport validate_smoothness(const SpaceInstance& space, const SmoothnessModulus& tau,
                                     std::size_t samples, std::uint64_t seed) {
  SmoothnessReport report;
  detail::Rng rng(seed);
  // eps from 4 down to 2^-14
  const auto grid = detail::halving_grid(4.0, 17);
  for (double eps : grid)
    if (!(tau(eps) > 0.0)) report.nonpositive_tau.push_back(eps);
  if (!report.nonpositive_tau.empty()) return report;

  std::uniform_int_distribution<std::size_t> pick(0, grid.size() - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t s = 0; s < samples; ++s) {
    const double eps = grid[pick(rng)];
    const Vector x = detail::random_unit(rng, space);
    // Every fourth sample sits on the boundary ||y|| = tau(eps).
    const double radius = tau(eps) * (s % 4 == 0 ? 1.0 : unit(rng));
    const Vector y = radius * detail::random_unit(rng, space);
    const double yn = norm(space, y);
    const double lhs = norm(space, x + y) + norm(space, x - y);
    const double rhs = 2.0 + eps * yn;
    ++report.samples;
    if (lhs > rhs + kIdentitySlack * (1.0 + rhs)) report.violations.push_back({eps, yn, lhs, rhs});
  }
  return report;
}

}  // namespace accretia

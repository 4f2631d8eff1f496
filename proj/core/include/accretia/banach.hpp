#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace accretia {

/// Absolute and relative slack used by every floating-point identity check.
inline constexpr double kIdentitySlack = 1e-9;

/// Dense real vector of fixed dimension with finite coordinates.
///
/// The constructors reject NaN and infinite entries. Arithmetic operators do
/// not re-validate; the iteration engines check `is_finite()` per step.
class Vector {
public:
  Vector() = default;
  explicit Vector(std::size_t dim, double fill = 0.0);
  explicit Vector(std::vector<double> coords);
  Vector(std::initializer_list<double> coords);

  [[nodiscard]] std::size_t dim() const noexcept { return coords_.size(); }
  [[nodiscard]] std::span<const double> coords() const noexcept { return coords_; }
  [[nodiscard]] bool is_finite() const noexcept;
  [[nodiscard]] bool is_zero() const noexcept;

  double operator[](std::size_t i) const { return coords_[i]; }
  double& operator[](std::size_t i) { return coords_[i]; }

  Vector& operator+=(const Vector& other);
  Vector& operator-=(const Vector& other);
  Vector& operator*=(double s) noexcept;

  friend Vector operator+(Vector a, const Vector& b) { return a += b; }
  friend Vector operator-(Vector a, const Vector& b) { return a -= b; }
  friend Vector operator*(double s, Vector a) noexcept { return a *= s; }
  friend Vector operator*(Vector a, double s) noexcept { return a *= s; }
  friend Vector operator-(Vector a) noexcept { return a *= -1.0; }
  friend bool operator==(const Vector&, const Vector&) = default;

private:
  std::vector<double> coords_;
};

/// a + s*b without a temporary.
Vector axpy(const Vector& a, double s, const Vector& b);

/// Modulus of uniform smoothness: for every eps > 0 and unit x,
/// ||y|| <= tau(eps) implies ||x+y|| + ||x-y|| <= 2 + eps*||y||.
struct SmoothnessModulus {
  std::function<double(double)> tau;
  std::string descriptor;

  double operator()(double eps) const { return tau(eps); }
};

/// The Hilbert-space modulus tau(eps) = eps.
SmoothnessModulus hilbert_smoothness();

/// Finite-dimensional l_p^d with 1 < p < infinity.
class SpaceInstance {
public:
  SpaceInstance(std::size_t dim, double p, std::optional<SmoothnessModulus> tau = std::nullopt);

  /// l_2^d together with tau(eps) = eps.
  static SpaceInstance hilbert(std::size_t dim);

  [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
  [[nodiscard]] double p() const noexcept { return p_; }
  /// Conjugate exponent q with 1/p + 1/q = 1.
  [[nodiscard]] double dual_exponent() const noexcept { return q_; }
  [[nodiscard]] bool is_hilbert() const noexcept { return p_ == 2.0; }
  [[nodiscard]] const std::optional<SmoothnessModulus>& tau() const noexcept { return tau_; }

  void require_dim(const Vector& x) const;

private:
  std::size_t dim_;
  double p_;
  double q_;
  std::optional<SmoothnessModulus> tau_;
};

/// Scaled l_r norm of raw coordinates; used for both primal and dual norms.
double lp_norm(std::span<const double> coords, double r);

double norm(const SpaceInstance& space, const Vector& x);
double distance(const SpaceInstance& space, const Vector& x, const Vector& y);

/// Norm of a dual element, i.e. the l_q norm with q the conjugate exponent.
double dual_norm(const SpaceInstance& space, const Vector& j);

/// Normalized duality map. In l_p it is single valued:
/// j_i = ||x||^(2-p) sign(x_i) |x_i|^(p-1), and J(0) = 0.
Vector duality_map(const SpaceInstance& space, const Vector& x);

/// Coordinate pairing <y, j>.
double dual_pair(const SpaceInstance& space, const Vector& y, const Vector& j);

struct InequalityCheck {
  bool holds;
  double slack;  ///< right-hand side minus left-hand side
};

/// Checks ||x+y||^2 <= ||x||^2 + 2<y, J(x+y)>.
InequalityCheck check_subdiff_inequality(const SpaceInstance& space, const Vector& x,
                                         const Vector& y);

/// Modulus of uniform continuity of J on the ball of radius d:
/// eps^2/(12 d) * tau(eps/(2d)) for eps in (0,2] and d >= 1, with d < 1
/// treated as d = 1 and eps > 2 as eps = 2.
double omega_tau(const SmoothnessModulus& tau, double d, double eps);

struct SmoothnessViolation {
  double eps;
  double y_norm;
  double lhs;  ///< ||x+y|| + ||x-y||
  double rhs;  ///< 2 + eps*||y||
};

struct SmoothnessReport {
  std::size_t samples = 0;
  std::vector<SmoothnessViolation> violations;
  std::vector<double> nonpositive_tau;  ///< grid points with tau(eps) <= 0

  [[nodiscard]] bool ok() const noexcept { return violations.empty() && nonpositive_tau.empty(); }
};

/// Empirical validation of a candidate tau against the defining inequality,
/// sampling unit x and y with ||y|| <= tau(eps) on a geometric eps grid.
SmoothnessReport validate_smoothness(const SpaceInstance& space, const SmoothnessModulus& tau,
                                     std::size_t samples, std::uint64_t seed);

}  // namespace accretia

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>

namespace accretia {

/// Natural-number index produced by a rate. Saturates at kUnbounded instead
/// of wrapping; rates from the Ishikawa theorems routinely exceed 2^64.
using Index = std::uint64_t;
inline constexpr Index kUnbounded = std::numeric_limits<Index>::max();

/// Ceiling of a nonnegative real as an index. Values within a few ulps above
/// an integer are treated as that integer, negative values map to 0 and
/// anything beyond the index range saturates. NaN is rejected.
Index ceil_index(double x);

/// The same snapping ceiling on doubles (used by the expression language).
double snapped_ceil(double x);

Index saturating_add(Index a, Index b) noexcept;

/// Converts an index to double, mapping kUnbounded to +inf.
double index_to_real(Index n) noexcept;

namespace rates {

/// phi with  forall eps > 0, forall n >= phi(eps): a_n <= eps.
class RateOfConvergence {
public:
  using Fn = std::function<Index(double)>;

  RateOfConvergence() = default;
  explicit RateOfConvergence(Fn fn) : fn_(std::move(fn)) {}

  Index operator()(double eps) const;
  explicit operator bool() const noexcept { return static_cast<bool>(fn_); }

private:
  Fn fn_;
};

/// r with  sum_{i=N}^{r(N,x)} a_i >= x. Evaluation enforces r(N,x) >= N.
class RateOfDivergence {
public:
  using Fn = std::function<Index(Index, double)>;

  RateOfDivergence() = default;
  explicit RateOfDivergence(Fn fn) : fn_(std::move(fn)) {}

  Index operator()(Index n, double x) const;
  explicit operator bool() const noexcept { return static_cast<bool>(fn_); }

private:
  Fn fn_;
};

/// The pair (N(eps), varphi(eps)) witnessing the decrease property
///   forall n >= N(eps): eps < t_{n+1}  ->  t_{n+1} <= t_n - a_n varphi(eps).
struct StarWitness {
  std::function<Index(double)> big_n;
  std::function<double(double)> varphi;
};

/// Converts a classical divergence witness f (sum_{i=0}^{f(x)} a_i >= x) for a
/// sequence bounded by `alpha_bound` into r(N,x) = max(N, f(x + alpha_bound*N)).
RateOfDivergence divergence_from_simple(std::function<Index(double)> f, double alpha_bound);

/// r(N,x) = N + ceil(x / a) for a sequence with every term >= a > 0.
RateOfDivergence divergence_for_lower_bound(double a);

/// Psi(eps) = r(N(eps), K / varphi(eps)) + 1.
RateOfConvergence technical_rate(double big_k, RateOfDivergence r, StarWitness w);

/// Linear rate ceil(log(K/eps) / log(1 + alpha*c)), clamped at 0.
RateOfConvergence linear_rate(double big_k, double alpha, double c);

struct InverseOptions {
  double lo = 0x1p-40;
  double hi = 0x1p40;
  int max_expansions = 20;
  double rel_tol = 1e-10;
};

/// Solves f(eps) = s for a strictly decreasing continuous f on (0, inf),
/// using bracket expansion followed by bisection in log space.
/// Throws std::domain_error when s is not reached within the bracket budget.
double inverse_decreasing(const std::function<double(double)>& f, double s,
                          const InverseOptions& opts = {});

/// Partial sum sum_{i=N}^{m} a_i with the empty-sum convention for m < N.
double partial_sum(std::span<const double> alpha, std::size_t from, std::size_t to);

/// Least index at which the prefix sum a_0 + ... + a_n strictly exceeds
/// `level`, or nullopt if the prefix never does so.
std::optional<std::size_t> first_prefix_above(std::span<const double> alpha, double level);

}  // namespace rates
}  // namespace accretia

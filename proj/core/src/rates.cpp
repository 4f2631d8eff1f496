#include "accretia/rates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace accretia {

namespace {

// 2^64 as a double; every double >= this is outside the index range.
constexpr double kIndexLimit = 18446744073709551616.0;

constexpr double kSnapUlps = 4.0 * std::numeric_limits<double>::epsilon();

}  // namespace

double snapped_ceil(double x) {
  if (!std::isfinite(x)) return x;
  const double nearest = std::round(x);
  if (std::abs(x - nearest) <= kSnapUlps * std::max(1.0, std::abs(x))) return nearest;
  return std::ceil(x);
}

Index ceil_index(double x) {
  if (std::isnan(x)) throw std::domain_error("ceil_index: NaN");
  const double c = snapped_ceil(x);
  if (c <= 0.0) return 0;
  if (c >= kIndexLimit) return kUnbounded;
  return static_cast<Index>(c);
}

Index saturating_add(Index a, Index b) noexcept {
  return a > kUnbounded - b ? kUnbounded : a + b;
}

double index_to_real(Index n) noexcept {
  return n == kUnbounded ? std::numeric_limits<double>::infinity() : static_cast<double>(n);
}

namespace rates {

Index RateOfConvergence::operator()(double eps) const {
  if (!fn_) throw std::logic_error("RateOfConvergence: empty");
  if (!(eps > 0.0)) throw std::invalid_argument("RateOfConvergence: eps must be positive");
  return fn_(eps);
}

Index RateOfDivergence::operator()(Index n, double x) const {
  if (!fn_) throw std::logic_error("RateOfDivergence: empty");
  if (!(x > 0.0)) throw std::invalid_argument("RateOfDivergence: x must be positive");
  return std::max(n, fn_(n, x));
}

RateOfDivergence divergence_from_simple(std::function<Index(double)> f, double alpha_bound) {
  if (!(alpha_bound > 0.0))
    throw std::invalid_argument("divergence_from_simple: alpha bound must be positive");
  return RateOfDivergence([f = std::move(f), alpha_bound](Index n, double x) -> Index {
    const double shifted = x + alpha_bound * index_to_real(n);
    if (!std::isfinite(shifted)) return kUnbounded;
    return std::max(n, f(shifted));
  });
}

RateOfDivergence divergence_for_lower_bound(double a) {
  if (!(a > 0.0)) throw std::invalid_argument("divergence_for_lower_bound: a must be positive");
  return RateOfDivergence(
      [a](Index n, double x) -> Index { return saturating_add(n, ceil_index(x / a)); });
}

RateOfConvergence technical_rate(double big_k, RateOfDivergence r, StarWitness w) {
  if (!(big_k > 0.0)) throw std::invalid_argument("technical_rate: K must be positive");
  return RateOfConvergence([big_k, r = std::move(r), w = std::move(w)](double eps) -> Index {
    const double v = w.varphi(eps);
    if (!(v > 0.0)) throw std::domain_error("technical_rate: varphi(eps) must be positive");
    const double x = big_k / v;
    if (!std::isfinite(x)) return kUnbounded;
    return saturating_add(r(w.big_n(eps), x), 1);
  });
}

RateOfConvergence linear_rate(double big_k, double alpha, double c) {
  if (!(big_k > 0.0) || !(alpha > 0.0) || !(c > 0.0))
    throw std::invalid_argument("linear_rate: K, alpha and c must be positive");
  const double base_log = std::log1p(alpha * c);
  return RateOfConvergence([big_k, base_log](double eps) -> Index {
    if (eps >= big_k) return 0;
    return ceil_index(std::log(big_k / eps) / base_log);
  });
}

double inverse_decreasing(const std::function<double(double)>& f, double s,
                          const InverseOptions& opts) {
  const double tol = opts.rel_tol * (1.0 + std::abs(s));
  double lo = opts.lo;
  double hi = opts.hi;
  int exponent_lo = -std::ilogb(lo);
  int exponent_hi = std::ilogb(hi);

  // f decreasing: need f(lo) >= s >= f(hi).
  for (int k = 0; f(lo) < s; ++k) {
    if (k >= opts.max_expansions || exponent_lo >= 1022)
      throw std::domain_error("inverse_decreasing: value above the range of f within budget");
    exponent_lo = std::min(2 * exponent_lo, 1022);
    lo = std::ldexp(1.0, -exponent_lo);
  }
  for (int k = 0; f(hi) > s; ++k) {
    if (k >= opts.max_expansions || exponent_hi >= 1023)
      throw std::domain_error("inverse_decreasing: value below the range of f within budget");
    exponent_hi = std::min(2 * exponent_hi, 1023);
    hi = std::ldexp(1.0, exponent_hi);
  }
  if (std::abs(f(lo) - s) <= tol) return lo;
  if (std::abs(f(hi) - s) <= tol) return hi;

  double best = lo;
  double best_err = std::abs(f(lo) - s);
  for (int it = 0; it < 4096; ++it) {
    const double mid = std::sqrt(lo) * std::sqrt(hi);
    const double m = (mid > lo && mid < hi) ? mid : lo + (hi - lo) / 2;
    if (!(m > lo && m < hi)) break;  // adjacent doubles
    const double fm = f(m);
    const double err = std::abs(fm - s);
    if (err < best_err) {
      best = m;
      best_err = err;
    }
    if (err <= tol) return m;
    if (fm > s)
      lo = m;
    else
      hi = m;
  }
  return best;
}

double partial_sum(std::span<const double> alpha, std::size_t from, std::size_t to) {
  if (to < from) return 0.0;
  if (to >= alpha.size()) throw std::out_of_range("partial_sum: index beyond sequence");
  double s = 0.0;
  for (std::size_t i = from; i <= to; ++i) s += alpha[i];
  return s;
}

std::optional<std::size_t> first_prefix_above(std::span<const double> alpha, double level) {
  double s = 0.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    s += alpha[i];
    if (s > level) return i;
  }
  return std::nullopt;
}

}  // namespace rates
}  // namespace accretia

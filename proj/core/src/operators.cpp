#include "accretia/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "sampling.hpp"

namespace accretia::ops {

namespace {

constexpr double kStrictMargin = 1e-6;
constexpr std::size_t kInfGrid = 4096;

double strict_above(double bound) { return bound * (1.0 + kStrictMargin) + 1e-12; }

}  // namespace

double apply_sigmoid(Sigmoid s, double t) noexcept {
  switch (s) {
    case Sigmoid::tanh:
      return std::tanh(t);
    case Sigmoid::algebraic:
      return t / (1.0 + std::abs(t));
  }
  return 0.0;
}

std::string to_string(Sigmoid s) {
  return s == Sigmoid::tanh ? "tanh" : "algebraic";
}

Sigmoid sigmoid_from_string(const std::string& name) {
  if (name == "tanh") return Sigmoid::tanh;
  if (name == "algebraic") return Sigmoid::algebraic;
  throw std::invalid_argument("unknown sigmoid '" + name + "' (expected tanh or algebraic)");
}

Vector OperatorInstance::complement(const Vector& x) const {
  return x - select(x);
}

void validate_operator(const OperatorInstance& op) {
  if (!op.select) throw std::invalid_argument(op.name + ": missing selection");
  op.space.require_dim(op.zero);
  const Vector at_zero = op.select(op.zero);
  if (norm(op.space, at_zero) > kIdentitySlack)
    throw std::invalid_argument(op.name + ": q is not a zero of the canonical selection");
  if (op.members) {
    const auto image = op.members(op.zero);
    const bool found = std::any_of(image.begin(), image.end(), [&](const Vector& v) {
      return distance(op.space, v, at_zero) <= kIdentitySlack;
    });
    if (!found) throw std::invalid_argument(op.name + ": select(q) is not a member of A(q)");
  }
  if (op.lipschitz && !(*op.lipschitz > 0.0))
    throw std::invalid_argument(op.name + ": Lipschitz constant must be positive");
  if (op.range_bound && !(*op.range_bound > 0.0))
    throw std::invalid_argument(op.name + ": range bound must be positive");
}

namespace {

OperatorInstance make_affine(std::string name, const SpaceInstance& space, Vector q,
                             std::vector<double> diag, Vector offset) {
  OperatorInstance op{std::move(name), space, {}, {}, std::move(q), std::nullopt,
                      std::nullopt, AffineDiagonal{diag, offset}};
  op.select = [diag = std::move(diag), offset = std::move(offset)](const Vector& x) {
    Vector out = offset;
    for (std::size_t i = 0; i < x.dim(); ++i) out[i] += diag[i] * x[i];
    return out;
  };
  op.lipschitz = *std::max_element(op.affine->diag.begin(), op.affine->diag.end());
  return op;
}

}  // namespace

OperatorInstance make_shift(const SpaceInstance& space, Vector q) {
  space.require_dim(q);
  std::vector<double> diag(space.dim(), 1.0);
  OperatorInstance op = make_affine("shift", space, q, std::move(diag), -q);
  op.range_bound = strict_above(norm(space, q));
  return op;
}

OperatorInstance make_diagonal(const SpaceInstance& space, Vector q, std::vector<double> diag) {
  space.require_dim(q);
  if (diag.size() != space.dim())
    throw std::invalid_argument("make_diagonal: diagonal length does not match dimension");
  for (double d : diag)
    if (!(d > 0.0) || !std::isfinite(d))
      throw std::invalid_argument("make_diagonal: diagonal entries must be positive");
  Vector offset(space.dim());
  for (std::size_t i = 0; i < space.dim(); ++i) offset[i] = -diag[i] * q[i];
  const bool identity = std::all_of(diag.begin(), diag.end(), [](double d) { return d == 1.0; });
  OperatorInstance op = make_affine("diagonal-linear", space, q, std::move(diag), std::move(offset));
  if (identity) op.range_bound = strict_above(norm(space, q));
  return op;
}

OperatorInstance make_bounded_perturbation(const SpaceInstance& space, Vector q, double lambda,
                                           Sigmoid sigmoid) {
  space.require_dim(q);
  if (!(lambda >= 0.0 && lambda <= 0.5))
    throw std::invalid_argument("make_bounded_perturbation: lambda must lie in [0, 0.5]");
  OperatorInstance op{"bounded-perturbation", space, {}, {}, q, std::nullopt, std::nullopt,
                      std::nullopt};
  op.select = [q, lambda, sigmoid](const Vector& x) {
    Vector out = x - q;
    for (std::size_t i = 0; i < out.dim(); ++i) out[i] += lambda * apply_sigmoid(sigmoid, out[i]);
    return out;
  };
  op.lipschitz = 1.0 + lambda;
  const double ones = std::pow(static_cast<double>(space.dim()), 1.0 / space.p());
  op.range_bound = strict_above(norm(space, q) + lambda * ones);
  return op;
}

OperatorInstance perturb(const OperatorInstance& base, double h, const Vector& b) {
  base.space.require_dim(b);
  OperatorInstance op = base;
  op.name = base.name + "+h*b";
  const Vector shift = h * b;
  op.select = [inner = base.select, shift](const Vector& x) { return inner(x) + shift; };
  if (base.members) {
    op.members = [inner = base.members, shift](const Vector& x) {
      auto image = inner(x);
      for (auto& v : image) v += shift;
      return image;
    };
  }
  if (op.affine) op.affine->offset += shift;
  // R(I - A_n) is the translate of R(I - A); the zero of A is not a zero of A_n.
  if (op.range_bound) op.range_bound = *op.range_bound + norm(base.space, shift);
  return op;
}

std::string to_string(AccretivityModulus::Provenance p) {
  switch (p) {
    case AccretivityModulus::Provenance::from_psi:
      return "from_psi";
    case AccretivityModulus::Provenance::from_phi:
      return "from_phi";
    case AccretivityModulus::Provenance::direct:
      return "direct";
  }
  return "direct";
}

double theta_from_psi(const std::function<double(double)>& psi, double eps) {
  const double v = psi(eps) * eps;
  if (!(v > 0.0)) throw std::domain_error("theta_from_psi: psi must be positive at eps");
  return v;
}

double theta_from_phi(const std::function<double(double)>& phi, double big_k, double eps) {
  if (!(eps > 0.0) || !(big_k > 0.0))
    throw std::invalid_argument("theta_from_phi: K and eps must be positive");
  const double lo = eps;
  const double hi = std::max(eps, big_k);
  double best = phi(lo);
  if (hi > lo) {
    const double step = (hi - lo) / static_cast<double>(kInfGrid - 1);
    std::size_t arg = 0;
    for (std::size_t i = 1; i < kInfGrid; ++i) {
      const double t = i + 1 == kInfGrid ? hi : lo + step * static_cast<double>(i);
      const double v = phi(t);
      if (v < best) {
        best = v;
        arg = i;
      }
    }
    // Golden-section search on the bracketing cells of the grid minimizer.
    double a = lo + step * static_cast<double>(arg == 0 ? 0 : arg - 1);
    double b = std::min(hi, lo + step * static_cast<double>(arg + 1));
    constexpr double kInvPhi = 0.6180339887498949;
    double c = b - kInvPhi * (b - a);
    double d = a + kInvPhi * (b - a);
    double fc = phi(c);
    double fd = phi(d);
    for (int it = 0; it < 80 && (b - a) > 1e-15 * std::max(1.0, std::abs(b)); ++it) {
      if (fc < fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - kInvPhi * (b - a);
        fc = phi(c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + kInvPhi * (b - a);
        fd = phi(d);
      }
      best = std::min({best, fc, fd});
    }
  }
  if (!(best > 0.0)) throw std::domain_error("theta_from_phi: phi is not positive on [eps, K]");
  return best;
}

AccretivityModulus modulus_from_psi(std::function<double(double)> psi) {
  AccretivityModulus m;
  m.provenance = AccretivityModulus::Provenance::from_psi;
  m.theta = [psi](double, double eps) { return theta_from_psi(psi, eps); };
  m.psi = std::move(psi);
  return m;
}

AccretivityModulus modulus_from_phi(std::function<double(double)> phi) {
  AccretivityModulus m;
  m.provenance = AccretivityModulus::Provenance::from_phi;
  m.theta = [phi = std::move(phi)](double big_k, double eps) {
    return theta_from_phi(phi, big_k, eps);
  };
  return m;
}

AccretivityModulus modulus_direct(std::function<double(double, double)> theta) {
  AccretivityModulus m;
  m.theta = std::move(theta);
  return m;
}

ModulusShapeReport check_modulus_shape(const AccretivityModulus& theta,
                                       std::span<const double> k_grid,
                                       std::span<const double> eps_grid) {
  ModulusShapeReport report;
  std::vector<double> eps(eps_grid.begin(), eps_grid.end());
  std::sort(eps.begin(), eps.end());
  for (double k : k_grid) {
    double prev = -std::numeric_limits<double>::infinity();
    for (double e : eps) {
      const double v = theta(k, e);
      if (!(v > 0.0)) report.nonpositive.emplace_back(k, e);
      if (v < prev * (1.0 - 1e-12)) report.decreasing.emplace_back(k, e);
      prev = v;
    }
  }
  return report;
}

SampleVerdict check_accretive_at(const OperatorInstance& op, const AccretivityModulus& theta,
                                 double big_k, double eps, const Vector& x,
                                 AccretivityViolation* violation) {
  const Vector v = x - op.zero;
  const double dist = norm(op.space, v);
  if (dist < eps || dist > big_k) return SampleVerdict::skipped;
  const double pairing = dual_pair(op.space, op.select(x), duality_map(op.space, v));
  const double required = theta(big_k, eps);
  if (pairing >= required - kIdentitySlack) return SampleVerdict::satisfied;
  if (violation) *violation = {x, eps, dist, pairing, required};
  return SampleVerdict::violated;
}

AccretivityReport verify_accretive_at_zero(const OperatorInstance& op,
                                           const AccretivityModulus& theta, double big_k,
                                           std::size_t samples, std::uint64_t seed) {
  if (!(big_k > 0.0)) throw std::invalid_argument("verify_accretive_at_zero: K must be positive");
  AccretivityReport report;
  detail::Rng rng(seed);
  const auto grid = detail::halving_grid(big_k, 11);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::size_t per_eps = std::max<std::size_t>(1, samples / grid.size());
  for (double eps : grid) {
    for (std::size_t s = 0; s < per_eps; ++s) {
      // Radii at both ends of [eps, K] plus uniform interior draws.
      double radius;
      if (s == 0)
        radius = eps;
      else if (s == 1)
        radius = big_k;
      else
        radius = eps + (big_k - eps) * unit(rng);
      const Vector x = axpy(op.zero, radius, detail::random_unit(rng, op.space));
      AccretivityViolation v;
      switch (check_accretive_at(op, theta, big_k, eps, x, &v)) {
        case SampleVerdict::skipped:
          ++report.skipped;
          break;
        case SampleVerdict::satisfied:
          ++report.checked;
          break;
        case SampleVerdict::violated:
          ++report.checked;
          report.violations.push_back(std::move(v));
          break;
      }
    }
  }
  return report;
}

PseudoContractionCheck pseudo_contraction_check(const OperatorInstance& op,
                                                const AccretivityModulus& theta, double big_k,
                                                const Vector& x) {
  const Vector v = x - op.zero;
  const double dist = norm(op.space, v);
  if (!(dist > 0.0)) throw std::invalid_argument("pseudo_contraction_check: x must differ from q");
  if (dist > big_k) throw std::invalid_argument("pseudo_contraction_check: ||x - q|| exceeds K");
  const Vector u = op.complement(x);
  const double lhs = dual_pair(op.space, u - op.zero, duality_map(op.space, v));
  const double rhs = dist * dist - theta(big_k, dist);
  const double slack = rhs - lhs;
  return {slack >= -kIdentitySlack, slack};
}

namespace {

void require_nonempty(std::span<const Vector> p, std::span<const Vector> q) {
  if (p.empty() || q.empty()) throw std::invalid_argument("set distance: empty set");
}

double directed(std::span<const Vector> from, std::span<const Vector> to,
                const SpaceInstance& space) {
  double sup = 0.0;
  for (const auto& u : from) {
    double inf = std::numeric_limits<double>::infinity();
    for (const auto& v : to) inf = std::min(inf, distance(space, u, v));
    sup = std::max(sup, inf);
  }
  return sup;
}

}  // namespace

double hausdorff_finite(std::span<const Vector> p, std::span<const Vector> q,
                        const SpaceInstance& space) {
  require_nonempty(p, q);
  return std::max(directed(p, q, space), directed(q, p, space));
}

bool h_star(std::span<const Vector> p, std::span<const Vector> q, double a,
            const SpaceInstance& space) {
  require_nonempty(p, q);
  return std::all_of(p.begin(), p.end(), [&](const Vector& u) {
    return std::any_of(q.begin(), q.end(),
                       [&](const Vector& v) { return distance(space, u, v) <= a; });
  });
}

ContinuityReport verify_uniform_continuity(const OperatorInstance& op,
                                           const ContinuityModulus& varpi, double radius,
                                           std::size_t samples, std::uint64_t seed) {
  ContinuityReport report;
  detail::Rng rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto grid = detail::halving_grid(4.0, 14);
  for (std::size_t s = 0; s < samples; ++s) {
    const double eps = grid[s % grid.size()];
    const double delta = varpi(eps);
    if (!(delta > 0.0)) {
      report.violations.emplace_back(eps, std::numeric_limits<double>::quiet_NaN());
      continue;
    }
    const Vector x = axpy(op.zero, radius * unit(rng), detail::random_unit(rng, op.space));
    const double step = delta * (s % 3 == 0 ? 1.0 : unit(rng));
    const Vector y = axpy(x, step, detail::random_unit(rng, op.space));
    const double gap = distance(op.space, op.select(x), op.select(y));
    ++report.checked;
    if (gap > eps + kIdentitySlack * (1.0 + eps)) report.violations.emplace_back(eps, gap);
  }
  return report;
}

double sample_range_norm(const OperatorInstance& op, double radius, std::size_t samples,
                         std::uint64_t seed) {
  detail::Rng rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = norm(op.space, op.complement(op.zero));
  for (std::size_t s = 0; s < samples; ++s) {
    const Vector x = axpy(op.zero, radius * unit(rng), detail::random_unit(rng, op.space));
    worst = std::max(worst, norm(op.space, op.complement(x)));
  }
  return worst;
}

Index mu_from_approx(const ApproximationData& data, double big_l, double eps) {
  if (!(eps > 0.0) || !(big_l > 0.0))
    throw std::invalid_argument("mu_from_approx: L and eps must be positive");
  const double xi = data.xi_star(big_l);
  if (!(xi > 0.0)) throw std::domain_error("mu_from_approx: xi_star(L) must be positive");
  return data.h_rate(2.0 * eps / (3.0 * xi));
}

std::vector<double> xi_star_monotonicity_violations(const ApproximationData& data,
                                                    std::span<const double> grid) {
  std::vector<double> g(grid.begin(), grid.end());
  std::sort(g.begin(), g.end());
  std::vector<double> bad;
  for (std::size_t i = 1; i < g.size(); ++i)
    if (data.xi_star(g[i - 1]) > data.xi_star(g[i])) bad.push_back(g[i]);
  return bad;
}

}  // namespace accretia::ops

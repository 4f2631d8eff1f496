#include "accretia/schemes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace accretia::schemes {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double positive_theta(const ops::AccretivityModulus& theta, double big_k, double eps) {
  const double v = theta(big_k, eps);
  if (!(v > 0.0)) throw std::domain_error("accretivity modulus must be positive");
  return v;
}

/// r(n, x) + 1 with x possibly overflowing to infinity.
Index rate_tail(const rates::RateOfDivergence& r, Index n, double x) {
  if (!std::isfinite(x)) return kUnbounded;
  return saturating_add(r(n, x), 1);
}

Index joint_at(const rates::RateOfConvergence& phi, double arg) {
  if (!(arg > 0.0)) return kUnbounded;  // underflowed argument: no finite index certifies it
  return phi(arg);
}

void require_finite_step(const Vector& v, std::size_t step) {
  if (!v.is_finite()) throw SolverError("iterate is no longer finite", step);
}

double implicit_defect(const ops::OperatorInstance& op, const Vector& z, double alpha,
                       const Vector& x) {
  return norm(op.space, axpy(z, alpha, op.select(z)) - x);
}

}  // namespace

std::vector<ScheduleIssue> validate_schedule(const ScalarSchedule& schedule, std::size_t horizon,
                                             double upper) {
  std::vector<ScheduleIssue> issues;
  auto check = [&](const char* name, const std::function<double(std::size_t)>& seq) {
    for (std::size_t n = 0; n <= horizon; ++n) {
      const double v = seq(n);
      if (!(v >= 0.0 && v < upper)) {
        issues.push_back({n, std::string(name) + " = " + std::to_string(v) + " outside [0, " +
                                 std::to_string(upper) + ")"});
        return;
      }
    }
  };
  if (!schedule.alpha) {
    issues.push_back({0, "alpha schedule missing"});
    return issues;
  }
  check("alpha", schedule.alpha);
  if (schedule.beta) check("beta", schedule.beta);
  if (schedule.joint_rate) {
    for (int k = 1; k <= 12; ++k) {
      const double eps = std::ldexp(1.0, -k);
      const Index start = schedule.joint_rate(eps);
      if (start > horizon) continue;
      for (std::size_t n = start; n <= horizon; ++n) {
        const double m = std::max(schedule.alpha(n), schedule.beta ? schedule.beta(n) : 0.0);
        if (m > eps) {
          issues.push_back({n, "joint rate violated at eps = " + std::to_string(eps)});
          break;
        }
      }
    }
  }
  return issues;
}

double ishikawa_bound(double k0, double k1) { return 2.0 * k0 + k1; }

double approx_bound(double k0, double k2, double xi_star_k1) { return k0 + k2 * xi_star_k1; }

std::string to_string(SchemeId id) {
  switch (id) {
    case SchemeId::implicit_simple:
      return "implicit-simple";
    case SchemeId::implicit_approx:
      return "implicit-approx";
    case SchemeId::ishikawa:
      return "ishikawa";
  }
  return "unknown";
}

Vector solve_implicit_step(const ops::OperatorInstance& op, const Vector& x, double alpha,
                           std::size_t step) {
  op.space.require_dim(x);
  if (!(alpha >= 0.0)) throw SolverError("implicit step needs alpha >= 0", step);
  if (alpha == 0.0) return x;
  const double tol = kImplicitTolerance * (1.0 + norm(op.space, x));

  if (op.affine) {
    const auto& aff = *op.affine;
    Vector z(x.dim());
    for (std::size_t i = 0; i < x.dim(); ++i)
      z[i] = (x[i] - alpha * aff.offset[i]) / (1.0 + alpha * aff.diag[i]);
    require_finite_step(z, step);
    return z;
  }

  const std::optional<double> lip = op.lipschitz;
  Vector z = x;
  if (lip && alpha * *lip < 1.0) {
    for (std::size_t it = 0; it < kImplicitMaxInner; ++it) {
      z = axpy(x, -alpha, op.select(z));
      if (implicit_defect(op, z, alpha, x) <= tol) return z;
    }
  } else if (lip && op.space.is_hilbert()) {
    // F(z) = z + alpha A(z) - x is 1-strongly monotone and (1 + alpha L)-Lipschitz,
    // so z <- z - w F(z) contracts by sqrt(1 - w) for w = 1/(1 + alpha L)^2.
    const double w = 1.0 / std::pow(1.0 + alpha * *lip, 2);
    for (std::size_t it = 0; it < kImplicitMaxInner; ++it) {
      const Vector f = axpy(z, alpha, op.select(z)) - x;
      if (norm(op.space, f) <= tol) return z;
      z = axpy(z, -w, f);
    }
  } else {
    throw SolverError("no contractive inner iteration for alpha * lipschitz >= 1", step);
  }
  if (implicit_defect(op, z, alpha, x) <= tol) return z;
  throw SolverError("implicit step did not converge within 10^4 inner iterations", step);
}

namespace {

template <class OperatorAt>
IterationTrace run_implicit(SchemeId id, OperatorAt&& op_at, const SpaceInstance& space,
                            const Vector& q, const ScalarSchedule& schedule, const Vector& x0,
                            std::size_t horizon) {
  if (horizon < 1) throw std::invalid_argument("horizon must be at least 1");
  space.require_dim(x0);
  IterationTrace trace;
  trace.scheme = id;
  trace.horizon = horizon;
  trace.xs.reserve(horizon + 1);
  trace.us.reserve(horizon);
  trace.residuals.reserve(horizon + 1);
  trace.alphas.reserve(horizon + 1);
  trace.xs.push_back(x0);
  trace.residuals.push_back(distance(space, x0, q));
  for (std::size_t n = 0; n < horizon; ++n) {
    const double a = schedule.alpha(n);
    trace.alphas.push_back(a);
    const ops::OperatorInstance& op = op_at(n);
    Vector next = solve_implicit_step(op, trace.xs.back(), a, n);
    trace.us.push_back(op.select(next));
    trace.residuals.push_back(distance(space, next, q));
    trace.xs.push_back(std::move(next));
  }
  trace.alphas.push_back(schedule.alpha(horizon));
  return trace;
}

}  // namespace

IterationTrace run_implicit_simple(const ops::OperatorInstance& op, const ScalarSchedule& schedule,
                                   const Vector& x0, std::size_t horizon) {
  return run_implicit(
      SchemeId::implicit_simple, [&](std::size_t) -> const ops::OperatorInstance& { return op; },
      op.space, op.zero, schedule, x0, horizon);
}

IterationTrace run_implicit_approx(const ops::ApproximationData& data, const Vector& q,
                                   const ScalarSchedule& schedule, const Vector& x0,
                                   std::size_t horizon) {
  ops::OperatorInstance current = data.family(0);
  return run_implicit(
      SchemeId::implicit_approx,
      [&](std::size_t n) -> const ops::OperatorInstance& {
        current = data.family(n);
        return current;
      },
      current.space, q, schedule, x0, horizon);
}

IterationTrace run_ishikawa(const ops::OperatorInstance& op1, const ops::OperatorInstance& op2,
                            const ScalarSchedule& schedule, const Vector& x0, std::size_t horizon) {
  if (horizon < 1) throw std::invalid_argument("horizon must be at least 1");
  if (!schedule.beta) throw std::invalid_argument("Ishikawa scheme requires a beta schedule");
  const auto& space = op1.space;
  space.require_dim(x0);
  if (distance(space, op1.zero, op2.zero) > kIdentitySlack)
    throw std::invalid_argument("Ishikawa scheme requires a common zero of both operators");
  const Vector& q = op1.zero;

  IterationTrace trace;
  trace.scheme = SchemeId::ishikawa;
  trace.horizon = horizon;
  trace.xs.reserve(horizon + 1);
  trace.ys.reserve(horizon);
  trace.us.reserve(horizon);
  trace.vs.reserve(horizon);
  trace.residuals.reserve(horizon + 1);
  trace.alphas.reserve(horizon + 1);
  trace.betas.reserve(horizon + 1);
  trace.xs.push_back(x0);
  trace.residuals.push_back(distance(space, x0, q));
  for (std::size_t n = 0; n < horizon; ++n) {
    const double a = schedule.alpha(n);
    const double b = schedule.beta(n);
    trace.alphas.push_back(a);
    trace.betas.push_back(b);
    const Vector& x = trace.xs.back();
    Vector v = op2.complement(x);
    Vector y = axpy((1.0 - b) * x, b, v);
    Vector u = op1.complement(y);
    Vector next = axpy((1.0 - a) * x, a, u);
    require_finite_step(next, n);
    trace.residuals.push_back(distance(space, next, q));
    trace.vs.push_back(std::move(v));
    trace.ys.push_back(std::move(y));
    trace.us.push_back(std::move(u));
    trace.xs.push_back(std::move(next));
  }
  trace.alphas.push_back(schedule.alpha(horizon));
  trace.betas.push_back(schedule.beta(horizon));
  return trace;
}

rates::RateOfConvergence rate_implicit_simple(ops::AccretivityModulus theta,
                                              rates::RateOfDivergence r, double big_k) {
  if (!(big_k > 0.0)) throw std::invalid_argument("rate_implicit_simple: K must be positive");
  return rates::RateOfConvergence([theta = std::move(theta), r = std::move(r), big_k](double eps) {
    return rate_tail(r, 0, big_k * big_k / positive_theta(theta, big_k, eps));
  });
}

rates::RateOfConvergence rate_psi(std::function<double(double)> psi, rates::RateOfDivergence r,
                                  double big_k) {
  if (!(big_k > 0.0)) throw std::invalid_argument("rate_psi: K must be positive");
  return rates::RateOfConvergence([psi = std::move(psi), r = std::move(r), big_k](double eps) {
    const double p = psi(eps);
    if (!(p > 0.0)) throw std::domain_error("rate_psi: psi must be positive");
    return rate_tail(r, 0, big_k / p);
  });
}

rates::RateOfConvergence rate_implicit_approx(ops::AccretivityModulus theta, ApproximationRate mu,
                                              rates::RateOfDivergence r, double big_k,
                                              double k_prime) {
  if (!(big_k > 0.0) || !(k_prime > 0.0))
    throw std::invalid_argument("rate_implicit_approx: K and K' must be positive");
  return rates::RateOfConvergence(
      [theta = std::move(theta), mu = std::move(mu), r = std::move(r), big_k, k_prime](double eps) {
        const double t = positive_theta(theta, big_k, eps);
        const double level = t / (2.0 * big_k);
        const Index start = level > 0.0 ? mu(big_k + k_prime, level) : kUnbounded;
        return rate_tail(r, start, big_k * big_k / t);
      });
}

rates::RateOfConvergence rate_implicit_approx_summable(ops::AccretivityModulus theta,
                                                       rates::RateOfConvergence h_rate,
                                                       std::function<double(double)> xi_star,
                                                       rates::RateOfDivergence r, double k0,
                                                       double k1, double k2) {
  if (!(k0 > 0.0) || !(k1 > 0.0) || !(k2 > 0.0))
    throw std::invalid_argument("rate_implicit_approx_summable: K0, K1, K2 must be positive");
  const double xi_k1 = xi_star(k1);
  if (!(xi_k1 > 0.0)) throw std::domain_error("xi_star(K1) must be positive");
  const double big_k = approx_bound(k0, k2, xi_k1);
  const double xi_outer = xi_star(big_k + k1);
  if (!(xi_outer > 0.0)) throw std::domain_error("xi_star(K + K1) must be positive");
  return rates::RateOfConvergence(
      [theta = std::move(theta), h_rate = std::move(h_rate), r = std::move(r), big_k,
       xi_outer](double eps) {
        const double t = positive_theta(theta, big_k, eps);
        const Index start = joint_at(h_rate, t / (3.0 * big_k * xi_outer));
        return rate_tail(r, start, big_k * big_k / t);
      });
}

double ishikawa_continuous_argument(const ops::AccretivityModulus& theta,
                                    const ops::ContinuityModulus& varpi, double big_k,
                                    double eps) {
  const double level = positive_theta(theta, big_k, eps) / (16.0 * big_k);
  const double w = varpi(level);
  if (!(w > 0.0)) throw std::domain_error("continuity modulus must be positive");
  return std::min(0.25, std::min(level, w) / (6.0 * big_k));
}

double ishikawa_smooth_argument(const ops::AccretivityModulus& theta, const SmoothnessModulus& tau,
                                double big_k, double eps) {
  const double t = positive_theta(theta, big_k, eps / 2.0);
  const double inner = std::min({eps / 2.0, 3.0 * t / (32.0 * big_k),
                                 omega_tau(tau, big_k, t / (16.0 * big_k))});
  return inner / (6.0 * big_k);
}

rates::RateOfConvergence rate_ishikawa_continuous(ops::AccretivityModulus theta,
                                                  ops::ContinuityModulus varpi,
                                                  rates::RateOfConvergence joint_rate,
                                                  rates::RateOfDivergence r, double k0, double k1) {
  const double big_k = ishikawa_bound(k0, k1);
  if (!(k0 > 0.0) || !(k1 > 0.0))
    throw std::invalid_argument("rate_ishikawa_continuous: K0 and K1 must be positive");
  return rates::RateOfConvergence([theta = std::move(theta), varpi = std::move(varpi),
                                   phi = std::move(joint_rate), r = std::move(r),
                                   big_k](double eps) {
    const Index start = joint_at(phi, ishikawa_continuous_argument(theta, varpi, big_k, eps));
    return rate_tail(r, start, big_k * big_k / positive_theta(theta, big_k, eps));
  });
}

rates::RateOfConvergence rate_ishikawa_smooth(ops::AccretivityModulus theta, SmoothnessModulus tau,
                                              rates::RateOfConvergence joint_rate,
                                              rates::RateOfDivergence r, double k0, double k1) {
  const double big_k = ishikawa_bound(k0, k1);
  if (!(k0 > 0.0) || !(k1 > 0.0))
    throw std::invalid_argument("rate_ishikawa_smooth: K0 and K1 must be positive");
  return rates::RateOfConvergence([theta = std::move(theta), tau = std::move(tau),
                                   phi = std::move(joint_rate), r = std::move(r),
                                   big_k](double eps) {
    const Index start = joint_at(phi, ishikawa_smooth_argument(theta, tau, big_k, eps));
    return rate_tail(r, start, big_k * big_k / positive_theta(theta, big_k, eps / 2.0));
  });
}

double bound_cor44(const std::function<double(double)>& psi, double big_k, double partial_sum) {
  if (!(partial_sum > 0.0)) throw std::invalid_argument("bound_cor44: partial sum must be positive");
  return rates::inverse_decreasing([&](double e) { return big_k / psi(e); }, partial_sum);
}

Cor44Envelope envelope_cor44(const std::function<double(double)>& psi, double big_k,
                             std::span<const double> alphas) {
  // inf f for f(e) = K / psi(e), read off far out on the bracket.
  double inf_f = std::numeric_limits<double>::infinity();
  // An overflowing psi says nothing about the limit, so only finite values count.
  for (int e : {40, 80, 160, 320, 640, 1023}) {
    const double p = psi(std::ldexp(1.0, e));
    if (std::isfinite(p) && p > 0.0) inf_f = std::min(inf_f, big_k / p);
  }
  if (!std::isfinite(inf_f)) inf_f = 0.0;
  const auto n0 = rates::first_prefix_above(alphas, inf_f);
  if (!n0) throw std::domain_error("envelope_cor44: partial sums never enter the range of f");

  Cor44Envelope env;
  env.n0 = *n0;
  env.bound.assign(alphas.size(), kNaN);
  double s = 0.0;
  for (std::size_t n = 0; n < alphas.size(); ++n) {
    if (n >= env.valid_from()) env.bound[n] = bound_cor44(psi, big_k, s);
    s += alphas[n];
  }
  return env;
}

IshikawaStepReport check_ishikawa_steps(const IterationTrace& trace, const SpaceInstance& space,
                                        double big_k) {
  IshikawaStepReport report;
  const double tol = kIdentitySlack;
  for (std::size_t n = 0; n < trace.residuals.size(); ++n) {
    report.max_residual = std::max(report.max_residual, trace.residuals[n]);
    if (!(trace.residuals[n] < big_k + tol)) report.bound_violations.push_back(n);
  }
  for (std::size_t n = 0; n < trace.ys.size(); ++n) {
    ++report.steps;
    const double gap = distance(space, trace.ys[n], trace.xs[n + 1]);
    const double limit = 3.0 * (trace.alphas[n] + trace.betas[n]) * big_k;
    if (limit > 0.0) report.max_gap_ratio = std::max(report.max_gap_ratio, gap / limit);
    if (gap > limit + tol) report.gap_violations.push_back(n);
  }
  return report;
}

double implicit_fidelity(const IterationTrace& trace, const SpaceInstance& space,
                         const std::function<ops::OperatorInstance(std::size_t)>& op_at) {
  double worst = 0.0;
  for (std::size_t n = 0; n + 1 < trace.xs.size(); ++n) {
    const auto op = op_at(n);
    const Vector lhs = axpy(trace.xs[n + 1], trace.alphas[n], op.select(trace.xs[n + 1]));
    const double scale = 1.0 + norm(space, trace.xs[n]);
    worst = std::max(worst, distance(space, lhs, trace.xs[n]) / scale);
  }
  return worst;
}

}  // namespace accretia::schemes

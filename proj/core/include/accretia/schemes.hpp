#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "accretia/banach.hpp"
#include "accretia/operators.hpp"
#include "accretia/rates.hpp"

namespace accretia::schemes {

/// Raised when an implicit step cannot be solved or an iterate stops being finite.
class SolverError : public std::runtime_error {
public:
  SolverError(const std::string& what, std::size_t step)
      : std::runtime_error(what + " (step " + std::to_string(step) + ")"), step_(step) {}
  [[nodiscard]] std::size_t step() const noexcept { return step_; }

private:
  std::size_t step_;
};

/// Step sizes (alpha_n), optional (beta_n), a rate of divergence r for
/// sum alpha_i and an optional joint rate phi with max(alpha_n, beta_n) <= eps
/// for n >= phi(eps).
struct ScalarSchedule {
  std::function<double(std::size_t)> alpha;
  std::function<double(std::size_t)> beta;
  rates::RateOfDivergence r;
  rates::RateOfConvergence joint_rate;
};

struct ScheduleIssue {
  std::size_t n;
  std::string what;
};

/// Checks alpha_n (and beta_n when present) lie in [0, upper) for n <= horizon
/// and, when a joint rate is present, that it holds on a halving eps grid.
std::vector<ScheduleIssue> validate_schedule(const ScalarSchedule& schedule, std::size_t horizon,
                                             double upper);

/// Bounds used by the theorems: K (and K' for the approximating scheme),
/// K0 for R(I - A), K1 for ||x0 - q|| or ||q||, K2 for sum alpha_i h_i.
struct BoundSet {
  double big_k = 0.0;
  std::optional<double> k_prime;
  std::optional<double> k0;
  std::optional<double> k1;
  std::optional<double> k2;
};

/// K = 2 K0 + K1 for the Ishikawa schemes.
double ishikawa_bound(double k0, double k1);

/// K = K0 + K2 xi*(K1) for the approximating scheme with summable alpha_n h_n.
double approx_bound(double k0, double k2, double xi_star_k1);

enum class SchemeId { implicit_simple, implicit_approx, ishikawa };
std::string to_string(SchemeId id);

/// Complete record of one run. `ys`, `us`, `vs` hold one entry per step
/// (horizon entries); xs, residuals, alphas and betas hold horizon + 1.
struct IterationTrace {
  SchemeId scheme = SchemeId::implicit_simple;
  std::size_t horizon = 0;
  std::vector<Vector> xs;
  std::vector<Vector> ys;
  std::vector<Vector> us;
  std::vector<Vector> vs;
  std::vector<double> residuals;  ///< ||x_n - q||
  std::vector<double> alphas;
  std::vector<double> betas;      ///< empty when the scheme has no beta
};

inline constexpr double kImplicitTolerance = 1e-12;
inline constexpr std::size_t kImplicitMaxInner = 10'000;

/// Solves z + alpha * select(z) = x.
///
/// Affine operators use the closed-form resolvent. Otherwise a Picard
/// iteration z <- x - alpha A(z) is used when alpha * lipschitz < 1; in a
/// Hilbert space with known Lipschitz constant a damped residual iteration
/// with step 1/(1 + alpha L)^2 covers the remaining case. Anything else, or
/// missing the 1e-12 tolerance within 10^4 inner steps, throws SolverError.
Vector solve_implicit_step(const ops::OperatorInstance& op, const Vector& x, double alpha,
                           std::size_t step = 0);

/// x_{n+1} = x_n - alpha_n u_n, u_n = A(x_{n+1}).
IterationTrace run_implicit_simple(const ops::OperatorInstance& op, const ScalarSchedule& schedule,
                                   const Vector& x0, std::size_t horizon);

/// x_{n+1} = x_n - alpha_n u_n, u_n = A_n(x_{n+1}); residuals measured against q.
IterationTrace run_implicit_approx(const ops::ApproximationData& data, const Vector& q,
                                   const ScalarSchedule& schedule, const Vector& x0,
                                   std::size_t horizon);

/// y_n = (1 - beta_n) x_n + beta_n v_n,     v_n = (I - A2) x_n
/// x_{n+1} = (1 - alpha_n) x_n + alpha_n u_n, u_n = (I - A1) y_n
/// With op1 == op2 this is the single-operator scheme.
IterationTrace run_ishikawa(const ops::OperatorInstance& op1, const ops::OperatorInstance& op2,
                            const ScalarSchedule& schedule, const Vector& x0, std::size_t horizon);

// Rates of convergence for ||x_n - q|| -> 0.

/// r(0, K^2 / Theta_K(eps)) + 1.
rates::RateOfConvergence rate_implicit_simple(ops::AccretivityModulus theta,
                                              rates::RateOfDivergence r, double big_k);

/// r(0, K / psi(eps)) + 1, available for psi-strongly accretive operators.
rates::RateOfConvergence rate_psi(std::function<double(double)> psi, rates::RateOfDivergence r,
                                  double big_k);

/// Rate of uniform approximation mu_L(eps).
using ApproximationRate = std::function<Index(double, double)>;

/// r(mu_{K+K'}(Theta_K(eps) / 2K), K^2 / Theta_K(eps)) + 1.
rates::RateOfConvergence rate_implicit_approx(ops::AccretivityModulus theta, ApproximationRate mu,
                                              rates::RateOfDivergence r, double big_k,
                                              double k_prime);

/// r(phi(Theta_K(eps) / (3 K xi*(K + K1))), K^2 / Theta_K(eps)) + 1 with K = K0 + K2 xi*(K1).
rates::RateOfConvergence rate_implicit_approx_summable(ops::AccretivityModulus theta,
                                                       rates::RateOfConvergence h_rate,
                                                       std::function<double(double)> xi_star,
                                                       rates::RateOfDivergence r, double k0,
                                                       double k1, double k2);

/// r(phi(min{1/4, (1/6K) min{Theta/16K, varpi(Theta/16K)}}), K^2/Theta) + 1,
/// Theta = Theta_K(eps), K = 2 K0 + K1.
rates::RateOfConvergence rate_ishikawa_continuous(ops::AccretivityModulus theta,
                                                  ops::ContinuityModulus varpi,
                                                  rates::RateOfConvergence joint_rate,
                                                  rates::RateOfDivergence r, double k0, double k1);

/// r(phi((1/6K) min{eps/2, 3 Theta/32K, omega_tau(K, Theta/16K)}), K^2/Theta) + 1,
/// Theta = Theta_K(eps/2), K = 2 K0 + K1.
rates::RateOfConvergence rate_ishikawa_smooth(ops::AccretivityModulus theta, SmoothnessModulus tau,
                                              rates::RateOfConvergence joint_rate,
                                              rates::RateOfDivergence r, double k0, double k1);

/// The joint-rate argument of the continuous Ishikawa rate (before phi).
double ishikawa_continuous_argument(const ops::AccretivityModulus& theta,
                                    const ops::ContinuityModulus& varpi, double big_k, double eps);

/// The joint-rate argument of the smooth-space Ishikawa rate (before phi).
double ishikawa_smooth_argument(const ops::AccretivityModulus& theta, const SmoothnessModulus& tau,
                                double big_k, double eps);

/// psi^{-1}(K / s) evaluated as the inverse of the decreasing f(eps) = K / psi(eps).
double bound_cor44(const std::function<double(double)>& psi, double big_k, double partial_sum);

/// Envelope psi^{-1}(K / sum_{i<n} alpha_i) along a schedule.
struct Cor44Envelope {
  std::size_t n0 = 0;            ///< least n with alpha_0 + ... + alpha_n > inf f
  std::vector<double> bound;     ///< bound[n] for n in [n0 + 1, horizon]; NaN below
  [[nodiscard]] std::size_t valid_from() const noexcept { return n0 + 1; }
};

Cor44Envelope envelope_cor44(const std::function<double(double)>& psi, double big_k,
                             std::span<const double> alphas);

/// Per-step Ishikawa checks: ||x_n - q|| < K and ||y_n - x_{n+1}|| <= 3 (alpha_n + beta_n) K.
struct IshikawaStepReport {
  std::size_t steps = 0;
  std::vector<std::size_t> bound_violations;
  std::vector<std::size_t> gap_violations;
  double max_residual = 0.0;
  double max_gap_ratio = 0.0;  ///< max ||y_n - x_{n+1}|| / (3 (alpha_n + beta_n) K)
  [[nodiscard]] bool ok() const noexcept {
    return bound_violations.empty() && gap_violations.empty();
  }
};

IshikawaStepReport check_ishikawa_steps(const IterationTrace& trace, const SpaceInstance& space,
                                        double big_k);

/// Largest |z + alpha_n select(z) - x_n| over all implicit steps of a trace.
double implicit_fidelity(const IterationTrace& trace, const SpaceInstance& space,
                         const std::function<ops::OperatorInstance(std::size_t)>& op_at);

}  // namespace accretia::schemes

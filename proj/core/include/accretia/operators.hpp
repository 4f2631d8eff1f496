#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "accretia/banach.hpp"
#include "accretia/rates.hpp"

namespace accretia::ops {

/// A(x) = diag .* x + offset. Affine operators get a closed-form resolvent.
struct AffineDiagonal {
  std::vector<double> diag;
  Vector offset;
};

/// Componentwise bounded 1-Lipschitz nondecreasing sigmoid with |s| <= 1.
enum class Sigmoid { tanh, algebraic };

double apply_sigmoid(Sigmoid s, double t) noexcept;
std::string to_string(Sigmoid s);
Sigmoid sigmoid_from_string(const std::string& name);

/// Possibly set-valued operator represented by a canonical selection.
///
/// Iteration engines consume `select` only. `members` optionally enumerates a
/// finite image A(x) for set-valued test instances and must contain select(x).
struct OperatorInstance {
  std::string name;
  SpaceInstance space;
  std::function<Vector(const Vector&)> select;
  std::function<std::vector<Vector>(const Vector&)> members;
  Vector zero;                               ///< q with 0 in A(q)
  std::optional<double> lipschitz;
  std::optional<double> range_bound;         ///< K0 with ||w|| < K0 for w in R(I - A)
  std::optional<AffineDiagonal> affine;

  Vector operator()(const Vector& x) const { return select(x); }
  /// x - select(x), the canonical element of (I - A)x.
  Vector complement(const Vector& x) const;
};

/// Throws std::invalid_argument if q is not a zero of the canonical selection
/// or if select(x) is missing from members(x) at x = q.
void validate_operator(const OperatorInstance& op);

/// A(x) = x - q.
OperatorInstance make_shift(const SpaceInstance& space, Vector q);

/// A(x) = D (x - q), D positive diagonal.
OperatorInstance make_diagonal(const SpaceInstance& space, Vector q, std::vector<double> diag);

/// A(x) = x - q + lambda * s(x - q) with s a bounded sigmoid and lambda in [0, 1/2].
/// R(I - A) = { q - lambda s(v) } is bounded by ||q|| + lambda ||(1,...,1)||.
OperatorInstance make_bounded_perturbation(const SpaceInstance& space, Vector q, double lambda,
                                           Sigmoid sigmoid = Sigmoid::tanh);

/// A_n(x) = A(x) + h * b. Keeps the affine form when the base has one.
OperatorInstance perturb(const OperatorInstance& base, double h, const Vector& b);

/// Modulus of uniform accretivity at zero, Theta_K(eps).
struct AccretivityModulus {
  enum class Provenance { from_psi, from_phi, direct };

  std::function<double(double, double)> theta;
  Provenance provenance = Provenance::direct;
  /// Present when built from psi-strong accretivity; enables the improved rate.
  std::function<double(double)> psi;

  double operator()(double big_k, double eps) const { return theta(big_k, eps); }
};

std::string to_string(AccretivityModulus::Provenance p);

/// psi(eps) * eps, independent of K.
double theta_from_psi(const std::function<double(double)>& psi, double eps);

/// inf { phi(t) : t in [eps, max(eps, K)] } to relative accuracy 1e-6, via a
/// 4096-point grid and golden-section refinement around the grid minimizer.
double theta_from_phi(const std::function<double(double)>& phi, double big_k, double eps);

AccretivityModulus modulus_from_psi(std::function<double(double)> psi);
AccretivityModulus modulus_from_phi(std::function<double(double)> phi);
AccretivityModulus modulus_direct(std::function<double(double, double)> theta);

/// Samples a modulus on a (K, eps) grid: positivity and monotonicity in eps.
struct ModulusShapeReport {
  std::vector<std::pair<double, double>> nonpositive;  ///< (K, eps)
  std::vector<std::pair<double, double>> decreasing;   ///< (K, eps) where theta drops
  [[nodiscard]] bool ok() const noexcept { return nonpositive.empty() && decreasing.empty(); }
};
ModulusShapeReport check_modulus_shape(const AccretivityModulus& theta,
                                       std::span<const double> k_grid,
                                       std::span<const double> eps_grid);

enum class SampleVerdict { skipped, satisfied, violated };

struct AccretivityViolation {
  Vector x;
  double eps;
  double distance;  ///< ||x - q||
  double pairing;   ///< <select(x), J(x - q)>
  double required;  ///< Theta_K(eps)
};

struct AccretivityReport {
  std::size_t checked = 0;
  std::size_t skipped = 0;
  std::vector<AccretivityViolation> violations;
  [[nodiscard]] bool ok() const noexcept { return violations.empty(); }
};

/// One instance of the guard  ||x-q|| in [eps, K] -> <select(x), J(x-q)> >= Theta_K(eps).
SampleVerdict check_accretive_at(const OperatorInstance& op, const AccretivityModulus& theta,
                                 double big_k, double eps, const Vector& x,
                                 AccretivityViolation* violation = nullptr);

/// Samples x with ||x-q|| in [eps, K] over a halving eps grid below K and
/// reports every sample whose pairing falls below Theta_K(eps) - 1e-9.
AccretivityReport verify_accretive_at_zero(const OperatorInstance& op,
                                           const AccretivityModulus& theta, double big_k,
                                           std::size_t samples, std::uint64_t seed = 0x5eed);

struct PseudoContractionCheck {
  bool holds;
  double slack;  ///< ||x-q||^2 - Theta_K(||x-q||) - <u - q, J(x-q)>
};

/// With u = x - select(x) in (I-A)x: <u - q, J(x-q)> <= ||x-q||^2 - Theta_K(||x-q||).
/// Requires 0 < ||x-q|| <= K.
PseudoContractionCheck pseudo_contraction_check(const OperatorInstance& op,
                                                const AccretivityModulus& theta, double big_k,
                                                const Vector& x);

/// Exact Hausdorff distance between finite nonempty sets.
double hausdorff_finite(std::span<const Vector> p, std::span<const Vector> q,
                        const SpaceInstance& space);

/// H*[P,Q,a]: every u in P has some v in Q with ||u - v|| <= a.
bool h_star(std::span<const Vector> p, std::span<const Vector> q, double a,
            const SpaceInstance& space);

/// Modulus of uniform continuity: ||x-y|| <= varpi(eps) -> H*[Ax, Ay, eps].
struct ContinuityModulus {
  std::function<double(double)> varpi;
  double operator()(double eps) const { return varpi(eps); }
};

struct ContinuityReport {
  std::size_t checked = 0;
  std::vector<std::pair<double, double>> violations;  ///< (eps, ||Ax - Ay||)
  [[nodiscard]] bool ok() const noexcept { return violations.empty(); }
};

/// Sampling check of a continuity modulus on pairs within `radius` of q.
ContinuityReport verify_uniform_continuity(const OperatorInstance& op,
                                           const ContinuityModulus& varpi, double radius,
                                           std::size_t samples, std::uint64_t seed = 0x5eed);

/// Largest ||x - select(x)|| seen on random x within `radius` of q.
double sample_range_norm(const OperatorInstance& op, double radius, std::size_t samples,
                         std::uint64_t seed = 0x5eed);

/// Operators A_n approximating A with H(A_n x, A x) <= h_n xi(||x||).
struct ApproximationData {
  std::function<OperatorInstance(std::size_t)> family;
  rates::RateOfConvergence h_rate;          ///< rate of convergence for h_n -> 0
  std::function<double(double)> xi_star;    ///< x <= y, y > 0 -> xi(x) <= xi_star(y)
  std::function<double(std::size_t)> h_seq;
  std::optional<double> partial_alpha_h_bound;  ///< K2 with sum alpha_i h_i < K2
};

/// mu_L(eps) = h_rate(2 eps / (3 xi_star(L))), a rate of uniform approximation.
Index mu_from_approx(const ApproximationData& data, double big_l, double eps);

/// Grid points t1 < t2 with xi_star(t1) > xi_star(t2).
std::vector<double> xi_star_monotonicity_violations(const ApproximationData& data,
                                                    std::span<const double> grid);

}  // namespace accretia::ops

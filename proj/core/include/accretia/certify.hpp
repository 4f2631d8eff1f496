#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "accretia/rates.hpp"
#include "accretia/schemes.hpp"

namespace accretia::certify {

/// Slack added to every eps comparison.
inline constexpr double kEpsSlack = 1e-9;

/// Counterexamples recorded per failed eps.
inline constexpr std::size_t kMaxCounterexamples = 8;

enum class Verdict { certified, vacuous, failed };
std::string to_string(Verdict v);

struct Counterexample {
  double eps;
  std::size_t n;
  double residual;
};

/// Outcome at one eps. `rate` is kUnbounded when the rate saturates.
struct EpsEntry {
  double eps = 0.0;
  Index rate = 0;
  Verdict verdict = Verdict::certified;
  std::vector<Counterexample> counterexamples;
  std::optional<std::size_t> first_entry;
  std::optional<double> slack_ratio;  ///< rate / first_entry when both finite and first_entry > 0
};

struct CertificationReport {
  std::string scenario_id;
  std::size_t horizon = 0;
  std::vector<EpsEntry> entries;

  [[nodiscard]] std::size_t count(Verdict v) const;
  [[nodiscard]] bool any_failed() const { return count(Verdict::failed) > 0; }
};

/// Halving grid 2^-1, ..., 2^-10.
std::vector<double> default_eps_grid();

/// Least n0 with residuals[m] <= eps (+ slack) for every m in [n0, horizon].
std::optional<std::size_t> empirical_first_entry(std::span<const double> residuals, double eps);

/// Checks a sequence against a rate of convergence on an eps grid:
/// certified when a_n <= eps for n in [rate(eps), horizon], vacuous when
/// rate(eps) > horizon, failed otherwise.
CertificationReport certify_sequence(std::span<const double> sequence,
                                     const rates::RateOfConvergence& rate,
                                     std::span<const double> eps_grid,
                                     std::string scenario_id = {});

CertificationReport certify(const schemes::IterationTrace& trace,
                            const rates::RateOfConvergence& rate, std::span<const double> eps_grid,
                            std::string scenario_id = {});

/// Plain dense-grid minimum of phi on [lo, hi], no refinement. Serves as an
/// independent check on the accretivity-modulus infimum.
double oracle_grid_min(const std::function<double(double)>& phi, double lo, double hi,
                       std::size_t points);

}  // namespace accretia::certify

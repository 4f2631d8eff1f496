#include "accretia/certify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace accretia::certify {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::certified:
      return "certified";
    case Verdict::vacuous:
      return "vacuous";
    case Verdict::failed:
      return "failed";
  }
  return "failed";
}

std::size_t CertificationReport::count(Verdict v) const {
  return static_cast<std::size_t>(std::count_if(
      entries.begin(), entries.end(), [v](const EpsEntry& e) { return e.verdict == v; }));
}

std::vector<double> default_eps_grid() {
  std::vector<double> grid;
  for (int k = 1; k <= 10; ++k) grid.push_back(std::ldexp(1.0, -k));
  return grid;
}

std::optional<std::size_t> empirical_first_entry(std::span<const double> residuals, double eps) {
  std::size_t n = residuals.size();
  while (n > 0 && residuals[n - 1] <= eps + kEpsSlack) --n;
  if (n == residuals.size()) return std::nullopt;
  return n;
}

CertificationReport certify_sequence(std::span<const double> sequence,
                                     const rates::RateOfConvergence& rate,
                                     std::span<const double> eps_grid, std::string scenario_id) {
  if (sequence.empty()) throw std::invalid_argument("certify: empty sequence");
  CertificationReport report;
  report.scenario_id = std::move(scenario_id);
  report.horizon = sequence.size() - 1;
  for (double eps : eps_grid) {
    EpsEntry entry;
    entry.eps = eps;
    entry.rate = rate(eps);
    entry.first_entry = empirical_first_entry(sequence, eps);
    if (entry.rate > report.horizon) {
      entry.verdict = Verdict::vacuous;
    } else {
      for (std::size_t n = entry.rate; n < sequence.size(); ++n) {
        if (sequence[n] > eps + kEpsSlack) {
          entry.verdict = Verdict::failed;
          if (entry.counterexamples.size() < kMaxCounterexamples)
            entry.counterexamples.push_back({eps, n, sequence[n]});
        }
      }
    }
    if (entry.rate != kUnbounded && entry.first_entry && *entry.first_entry > 0)
      entry.slack_ratio = static_cast<double>(entry.rate) / static_cast<double>(*entry.first_entry);
    report.entries.push_back(std::move(entry));
  }
  return report;
}

CertificationReport certify(const schemes::IterationTrace& trace,
                            const rates::RateOfConvergence& rate, std::span<const double> eps_grid,
                            std::string scenario_id) {
  return certify_sequence(trace.residuals, rate, eps_grid, std::move(scenario_id));
}

double oracle_grid_min(const std::function<double(double)>& phi, double lo, double hi,
                       std::size_t points) {
  if (!(lo <= hi)) throw std::invalid_argument("oracle_grid_min: lo must not exceed hi");
  if (points < 2) throw std::invalid_argument("oracle_grid_min: need at least two points");
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < points; ++i) {
    const double t = i + 1 == points
                         ? hi
                         : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
    best = std::min(best, phi(t));
  }
  return best;
}

}  // namespace accretia::certify

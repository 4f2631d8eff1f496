// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "accretia/banach.hpp"
#include "accretia/catalogue.hpp"
#include "accretia/certify.hpp"
#include "accretia/operators.hpp"
#include "accretia/rates.hpp"
#include "accretia/scenario.hpp"
#include "accretia/schemes.hpp"
#include "support.hpp"
#include "synthetic.hpp"

using namespace accretia;
namespace sc = accretia::scenario;
namespace t = accretia::gen;

namespace {

constexpr double kTol = 1e-9;

struct Outcome {
  bool pass;
  std::string detail;
};

std::string verdict_counts(const certify::CertificationReport& c) {
  std::ostringstream os;
  os << c.count(certify::Verdict::certified) << " certified, " << c.count(certify::Verdict::vacuous)
     << " vacuous, " << c.count(certify::Verdict::failed) << " failed";
  return os.str();
}

bool checks_passed(const sc::ScenarioReport& r, std::string& failed) {
  for (const auto& c : r.checks)
    if (!c.passed) {
      failed = c.name + ": " + c.detail;
      return false;
    }
  return !r.rejection;
}

// Harmonic partial sums against r(N, x) = max(N, ceil(e^(x + N))).
bool harmonic_divergence_ok(const rates::RateOfDivergence& r) {
  for (Index n : {0u, 1u, 2u, 3u})
    for (double x : {0.1, 0.5, 1.0, 2.0, 4.0, 6.0}) {
      const Index m = r(n, x);
      if (m < n) return false;
      double s = 0.0;
      for (Index i = n; i <= m; ++i) s += 1.0 / static_cast<double>(i + 1);
      if (s < x - 1e-12) return false;
    }
  return true;
}

Outcome criterion1() {
  const auto config = sc::bundled_config("implicit-shift-harmonic");
  const auto r = rates::divergence_from_simple([](double x) { return ceil_index(std::exp(x)); }, 1.0);
  if (!harmonic_divergence_ok(r)) return {false, "harmonic divergence witness refuted"};
  const auto start = std::chrono::steady_clock::now();
  const auto report = sc::run_scenario(config);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!report.certification) return {false, "rejected: " + report.rejection.value_or("?")};
  const auto& c = *report.certification;
  std::ostringstream os;
  os << verdict_counts(c) << " over horizon " << c.horizon << ", " << secs << " s";
  for (const auto& e : c.entries)
    if (e.verdict != certify::Verdict::certified) {
      os << "; first uncertified eps " << e.eps << " has Phi "
         << (e.rate == kUnbounded ? std::string("inf") : std::to_string(e.rate));
      break;
    }
  const bool all = c.count(certify::Verdict::certified) == c.entries.size() && c.entries.size() == 10;
  return {all && secs < 1.0 && c.horizon == 10'000, os.str()};
}

Outcome criterion2() {
  const SpaceInstance s(4, 2.0);
  const Vector q{0.25, -0.5, 0.0, 0.5};
  const Vector x0{0.75, 0.0, 0.5, 1.0};
  const auto op = ops::make_shift(s, q);
  schemes::ScalarSchedule sch;
  sch.alpha = [](std::size_t) { return 1.0; };
  const auto trace = schemes::run_implicit_simple(op, sch, x0, 60);
  const double k = distance(s, x0, q) * (1.0 + 1e-6);
  double worst_env = -1.0;
  double worst_resolvent = 0.0;
  for (std::size_t n = 0; n <= 60; ++n) {
    const double scale = std::ldexp(1.0, -static_cast<int>(n));
    worst_env = std::max(worst_env, trace.residuals[n] - (k * scale + kTol));
    for (std::size_t i = 0; i < 4; ++i)
      worst_resolvent = std::max(worst_resolvent, std::abs(trace.xs[n][i] - (q[i] + scale * (x0[i] - q[i]))));
  }
  // The linear rate from the same envelope certifies the trace.
  const auto lin = rates::linear_rate(k, 1.0, 1.0);
  const auto cert = certify::certify(trace, lin, certify::default_eps_grid());
  std::ostringstream os;
  os << "max envelope excess " << worst_env << ", max resolvent deviation " << worst_resolvent
     << ", linear rate " << verdict_counts(cert);
  return {worst_env <= 0.0 && worst_resolvent <= 1e-12 && !cert.any_failed(), os.str()};
}

Outcome criterion3() {
  const auto report = sc::run_scenario(sc::bundled_config("implicit-shift-cor44"));
  if (!report.envelope || !report.trace) return {false, "no envelope computed"};
  const auto& env = *report.envelope;
  const auto& res = report.trace->residuals;
  std::size_t violations = 0;
  for (std::size_t n = env.valid_from(); n < res.size(); ++n)
    if (!(res[n] < env.bound[n] + kTol)) ++violations;
  std::ostringstream os;
  os << "n0 = " << env.n0 << ", envelope from n = " << env.valid_from() << ", " << violations
     << " violations over " << res.size() - env.valid_from() << " steps";
  return {violations == 0 && env.n0 <= 10, os.str()};
}

Outcome criterion4() {
  std::ostringstream os;
  bool pass = true;
  for (const char* id : {"implicit-approx-thm55", "implicit-approx-thm56"}) {
    const auto config = sc::bundled_config(id);
    const auto report = sc::run_scenario(config);
    const SpaceInstance s(config.dim, config.p);
    const double b_norm = norm(s, Vector(config.approximation->b));
    std::string failed;
    const bool hyp = checks_passed(report, failed);
    double max_res = 0.0;
    if (report.trace)
      for (double r : report.trace->residuals) max_res = std::max(max_res, r);
    const bool ok = hyp && report.certification && !report.certification->any_failed() &&
                    std::abs(b_norm - 1.0) <= 1e-12 && max_res < report.bounds.big_k;
    pass = pass && ok;
    os << id << ": " << (report.certification ? verdict_counts(*report.certification) : failed)
       << ", max residual " << max_res << " < K = " << report.bounds.big_k << "; ";
  }
  return {pass, os.str()};
}

Outcome criterion5() {
  const auto config = sc::bundled_config("ishikawa-perturbed-thm64");
  const auto report = sc::run_scenario(config);
  std::string failed;
  if (!checks_passed(report, failed)) return {false, failed};
  const auto& tr = *report.trace;
  const SpaceInstance s(config.dim, config.p);
  const double k = report.bounds.big_k;
  const bool k_ok = std::abs(k - (2.0 * *report.bounds.k0 + *report.bounds.k1)) <= 1e-12 * k;
  std::size_t bad_steps = 0;
  std::size_t bad_schedule = 0;
  for (std::size_t n = 0; n + 1 < tr.xs.size(); ++n) {
    if (!(tr.alphas[n] >= 0.0 && tr.alphas[n] < 0.5 && tr.betas[n] >= 0.0 && tr.betas[n] < 0.5))
      ++bad_schedule;
    const bool bounded = tr.residuals[n] < k + kTol;
    const bool gap = distance(s, tr.ys[n], tr.xs[n + 1]) <= 3.0 * (tr.alphas[n] + tr.betas[n]) * k + kTol;
    if (!bounded || !gap) ++bad_steps;
  }
  if (!(tr.residuals.back() < k + kTol)) ++bad_steps;
  std::ostringstream os;
  os << verdict_counts(*report.certification) << ", K = 2K0 + K1 = " << k << ", " << bad_steps
     << " step violations over " << tr.xs.size() - 1 << " steps";
  return {k_ok && bad_steps == 0 && bad_schedule == 0 && !report.certification->any_failed(), os.str()};
}

Outcome criterion6() {
  const auto config = sc::bundled_config("ishikawa-two-op-hilbert");
  const auto smooth = validate_smoothness(SpaceInstance::hilbert(config.dim), hilbert_smoothness(), 10'000, 0x5eed);
  const auto report = sc::run_scenario(config);
  std::string failed;
  if (!checks_passed(report, failed)) return {false, failed};
  std::ostringstream os;
  os << "tau sweep " << smooth.samples << " samples, " << smooth.violations.size() << " violations; "
     << verdict_counts(*report.certification);
  return {config.p == 2.0 && config.op2.has_value() && smooth.ok() && smooth.samples >= 10'000 &&
              !report.certification->any_failed(),
          os.str()};
}

Outcome criterion7() {
  t::Rng rng(0xacce);
  std::size_t duality = 0, subdiff = 0, continuity = 0, hausdorff = 0;
  for (int i = 0; i < 10'000; ++i) {
    const std::size_t dim = t::uniform_index(rng, 1, 8);
    const SpaceInstance s(dim, t::gen_exponent(rng));
    const Vector x = t::gen_vector(rng, dim);
    const Vector j = duality_map(s, x);
    const double nx = norm(s, x);
    const double nj = dual_norm(s, j);
    if (std::abs(dual_pair(s, x, j) - nx * nx) > kTol * (1.0 + nx * nx) ||
        std::abs(nj * nj - nx * nx) > kTol * (1.0 + nx * nx))
      ++duality;
  }
  for (int i = 0; i < 10'000; ++i) {
    const std::size_t dim = t::uniform_index(rng, 1, 8);
    const SpaceInstance s(dim, t::gen_exponent(rng));
    if (!check_subdiff_inequality(s, t::gen_vector(rng, dim), t::gen_vector(rng, dim)).holds) ++subdiff;
  }
  const auto tau = hilbert_smoothness();
  for (int i = 0; i < 10'000; ++i) {
    const std::size_t dim = t::uniform_index(rng, 1, 6);
    const SpaceInstance s(dim, 2.0);
    const double d = std::pow(10.0, t::uniform(rng, -1.0, 1.0));
    const double eps = std::pow(10.0, t::uniform(rng, -3.0, 0.5));
    const Vector x = t::gen_in_ball(rng, s, d);
    Vector y = x + t::gen_in_ball(rng, s, omega_tau(tau, d, eps));
    if (norm(s, y) > d) y = (d / norm(s, y)) * y;
    if (distance(s, x, y) > omega_tau(tau, d, eps)) continue;
    if (dual_norm(s, duality_map(s, x) - duality_map(s, y)) > eps + kTol) ++continuity;
  }
  for (int i = 0; i < 10'000; ++i) {
    const std::size_t dim = t::uniform_index(rng, 1, 4);
    const SpaceInstance s(dim, t::gen_exponent(rng));
    std::vector<Vector> p(t::uniform_index(rng, 1, 8)), q(t::uniform_index(rng, 1, 8));
    for (auto& v : p) v = t::gen_box(rng, dim, 2.0);
    for (auto& v : q) v = t::gen_box(rng, dim, 2.0);
    const double a = ops::hausdorff_finite(p, q, s) + t::uniform(rng, 1e-9, 1.0);
    if (!ops::h_star(p, q, a, s) || !ops::h_star(q, p, a, s)) ++hausdorff;
  }
  std::ostringstream os;
  os << "violations: duality " << duality << ", subdifferential " << subdiff << ", J-continuity "
     << continuity << ", Hausdorff " << hausdorff << " (10000 samples each)";
  return {duality + subdiff + continuity + hausdorff == 0, os.str()};
}

Outcome criterion8() {
  t::Rng rng(0x5eed);
  const std::size_t horizon = 3000;
  const std::vector<double> grid{2.0, 1.0, 0.5, 0.25, 0.1, 0.05, 0.02, 0.01};
  std::size_t bad = 0, absorbed = 0, windows = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto s = t::make_synthetic(rng, horizon);
    const auto psi = s.rate();
    bool pair_ok = true;
    for (double eps : grid) {
      const Index start = psi(eps);
      if (start <= horizon) ++windows;
      for (std::size_t n = start; n <= horizon; ++n)
        if (s.theta[n] > eps) pair_ok = false;
      for (std::size_t n = s.n0; n < horizon; ++n)
        if (s.theta[n] <= eps && s.theta[n + 1] > eps) ++absorbed;
    }
    if (!pair_ok) ++bad;
  }
  std::ostringstream os;
  os << "100 pairs, " << windows << " nonvacuous windows, " << bad << " refuted pairs, " << absorbed
     << " absorption violations";
  return {bad == 0 && absorbed == 0, os.str()};
}

Outcome criterion9() {
  const auto broken = sc::run_scenario(sc::bundled_config("negative-broken-rate"));
  bool broken_ok = false;
  std::ostringstream os;
  if (broken.certification && broken.certification->any_failed()) {
    for (const auto& e : broken.certification->entries)
      if (e.verdict == certify::Verdict::failed && !e.counterexamples.empty()) {
        broken_ok = true;
        os << "broken rate fails at eps " << e.eps << " (n = " << e.counterexamples.front().n
           << ", residual " << e.counterexamples.front().residual << ")";
        break;
      }
  }
  const auto wrong = sc::run_scenario(sc::bundled_config("negative-wrong-theta"));
  const bool wrong_ok = wrong.rejection && wrong.rejection->find("accretivity") != std::string::npos &&
                        !wrong.trace && !wrong.certification;
  os << "; wrong theta " << (wrong_ok ? "rejected before iteration: " + *wrong.rejection : "not rejected");
  return {broken_ok && wrong_ok && sc::exit_code(broken) == sc::ExitCode::failed &&
              sc::exit_code(wrong) == sc::ExitCode::failed,
          os.str()};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"implicit scheme, harmonic steps, all eps certified", criterion1},
      {"linear envelope and closed-form resolvent", criterion2},
      {"inverse-function envelope", criterion3},
      {"approximating operators", criterion4},
      {"Ishikawa with continuity modulus", criterion5},
      {"two-operator Ishikawa in Hilbert space", criterion6},
      {"geometry property suites", criterion7},
      {"technical-rate synthetic suite", criterion8},
      {"negative controls", criterion9},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("criterion %zu: %s  %s  [%s]\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first,
                o.detail.c_str());
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}

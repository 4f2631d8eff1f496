#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "accretia/certify.hpp"
#include "support.hpp"

using namespace accretia;
using namespace accretia::certify;
using accretia::gen::Rng;

namespace {

std::vector<double> halving(std::size_t horizon) {
  std::vector<double> r(horizon + 1);
  for (std::size_t n = 0; n <= horizon; ++n) r[n] = std::ldexp(1.0, -static_cast<int>(n));
  return r;
}

rates::RateOfConvergence constant_rate(Index n) {
  return rates::RateOfConvergence([n](double) { return n; });
}

// Direct window scan, written independently of the harness.
bool window_holds(const std::vector<double>& seq, Index from, double eps) {
  for (std::size_t n = from; n < seq.size(); ++n)
    if (seq[n] > eps + 1e-9) return false;
  return true;
}

}  // namespace

TEST(FirstEntry, Examples) {
  EXPECT_EQ(empirical_first_entry(halving(40), 0x1p-5), std::optional<std::size_t>(5));
  const std::vector<double> flat(50, 1.0);
  EXPECT_FALSE(empirical_first_entry(flat, 0.5).has_value());
  const std::vector<double> dip{1.0, 0.1, 0.9, 0.8, 0.2, 0.1, 0.05};
  EXPECT_EQ(empirical_first_entry(dip, 0.3), std::optional<std::size_t>(4));
}

TEST(FirstEntry, MatchesBackwardScanOracle) {
  Rng rng(501);
  for (int i = 0; i < 2000; ++i) {
    std::vector<double> seq(gen::uniform_index(rng, 1, 60));
    for (auto& v : seq) v = gen::uniform(rng, 0.0, 1.0);
    const double eps = gen::uniform(rng, 0.0, 1.0);
    std::optional<std::size_t> oracle;
    for (std::size_t n = 0; n < seq.size(); ++n)
      if (window_holds(seq, n, eps)) {
        oracle = n;
        break;
      }
    ASSERT_EQ(empirical_first_entry(seq, eps), oracle);
  }
}

TEST(Certify, ShiftTraceWithHandRateIsCertified) {
  // Residuals 2^-n; the rate ceil(log2(1/eps)) + 1 is valid.
  const auto seq = halving(60);
  const auto rate = rates::RateOfConvergence([](double e) { return ceil_index(std::log2(1.0 / e)) + 1; });
  std::vector<double> grid;
  for (int k = 1; k <= 6; ++k) grid.push_back(std::ldexp(1.0, -k));
  const auto report = certify_sequence(seq, rate, grid, "halving");
  EXPECT_EQ(report.count(Verdict::certified), 6u);
  EXPECT_EQ(report.horizon, 60u);
  EXPECT_EQ(report.scenario_id, "halving");
}

TEST(Certify, ZeroRateFailsAtTheStart) {
  std::vector<double> slow(101);
  for (std::size_t n = 0; n <= 100; ++n) slow[n] = 1.0 / std::sqrt(n + 1.0);
  const std::vector<double> grid{0.5, 0.25};
  const auto report = certify_sequence(slow, constant_rate(0), grid);
  for (const auto& e : report.entries) {
    EXPECT_EQ(e.verdict, Verdict::failed);
    ASSERT_FALSE(e.counterexamples.empty());
    EXPECT_EQ(e.counterexamples.front().n, 0u);
    EXPECT_DOUBLE_EQ(e.counterexamples.front().residual, 1.0);
    EXPECT_LE(e.counterexamples.size(), kMaxCounterexamples);
  }
}

TEST(Certify, LargeEpsIsCertifiedFromZero) {
  const auto seq = halving(20);
  const std::vector<double> grid{2.0};
  const auto report = certify_sequence(seq, constant_rate(0), grid);
  EXPECT_EQ(report.entries[0].verdict, Verdict::certified);
  EXPECT_EQ(report.entries[0].first_entry, std::optional<std::size_t>(0));
  EXPECT_FALSE(report.entries[0].slack_ratio.has_value());
}

TEST(Certify, RateBeyondHorizonIsVacuous) {
  const auto seq = halving(20);
  const std::vector<double> grid{0.5};
  EXPECT_EQ(certify_sequence(seq, constant_rate(21), grid).entries[0].verdict, Verdict::vacuous);
  EXPECT_EQ(certify_sequence(seq, constant_rate(kUnbounded), grid).entries[0].verdict, Verdict::vacuous);
  EXPECT_EQ(certify_sequence(seq, constant_rate(20), grid).entries[0].verdict, Verdict::certified);
}

TEST(Certify, ReportInvariantsOnRandomInputs) {
  Rng rng(502);
  for (int i = 0; i < 1000; ++i) {
    std::vector<double> seq(gen::uniform_index(rng, 1, 300));
    double level = gen::uniform(rng, 0.1, 2.0);
    for (auto& v : seq) {
      level *= gen::uniform(rng, 0.8, 1.05);
      v = level;
    }
    const Index fixed = gen::uniform_index(rng, 0, 320);
    const auto rate = constant_rate(fixed);
    const std::vector<double> grid{1.0, 0.5, 0.25, 0.125, 0.0625};
    const auto a = certify_sequence(seq, rate, grid);
    const auto b = certify_sequence(seq, rate, grid);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const auto& e = a.entries[k];
      if (e.verdict == Verdict::failed) ASSERT_FALSE(e.counterexamples.empty());
      if (e.verdict == Verdict::certified) {
        ASSERT_TRUE(e.counterexamples.empty());
        ASSERT_TRUE(window_holds(seq, fixed, grid[k]));
        if (e.slack_ratio) ASSERT_GE(*e.slack_ratio, 1.0);
      }
      if (e.verdict == Verdict::vacuous) ASSERT_GT(fixed, seq.size() - 1);
      ASSERT_EQ(e.verdict, b.entries[k].verdict);
      ASSERT_EQ(e.first_entry, b.entries[k].first_entry);
      ASSERT_EQ(e.counterexamples.size(), b.entries[k].counterexamples.size());
    }
  }
}

TEST(Certify, EmptySequenceIsRejected) {
  const std::vector<double> grid{0.5};
  EXPECT_THROW((void)certify_sequence({}, constant_rate(0), grid), std::invalid_argument);
}

TEST(OracleGridMin, Examples) {
  EXPECT_NEAR(oracle_grid_min([](double t) { return t * t; }, 0.5, 2.0, 100'000), 0.25, 1e-5);
  EXPECT_EQ(oracle_grid_min([](double) { return 1.0; }, -3.0, 7.0, 10), 1.0);
  const double coarse = oracle_grid_min([](double t) { return t * std::exp(-t); }, 0.5, 3.0, 10'000);
  const double fine = oracle_grid_min([](double t) { return t * std::exp(-t); }, 0.5, 3.0, 1'000'000);
  EXPECT_NEAR(coarse, 0.14936, 1e-5);
  EXPECT_NEAR(fine, coarse, 1e-9);
  EXPECT_THROW((void)oracle_grid_min([](double t) { return t; }, 1.0, 0.0, 10), std::invalid_argument);
}

TEST(DefaultGrid, HalvesFromOneHalf) {
  const auto g = default_eps_grid();
  ASSERT_EQ(g.size(), 10u);
  EXPECT_EQ(g.front(), 0.5);
  EXPECT_EQ(g.back(), 0x1p-10);
}

#include <benchmark/benchmark.h>

#include <random>

#include "accretia/banach.hpp"
#include "accretia/catalogue.hpp"
#include "accretia/operators.hpp"
#include "accretia/scenario.hpp"
#include "accretia/schemes.hpp"

using namespace accretia;

namespace {

const Vector kQ{0.25, -0.5, 0.0, 0.5};
const Vector kX0{0.75, 0.0, 0.5, 1.0};

schemes::ScalarSchedule shifted_harmonic(double c) {
  schemes::ScalarSchedule s;
  s.alpha = [c](std::size_t n) { return 1.0 / (static_cast<double>(n) + c); };
  s.beta = s.alpha;
  return s;
}

void BM_DualityMap(benchmark::State& state) {
  const SpaceInstance s(static_cast<std::size_t>(state.range(0)), 3.0);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> c(s.dim());
  for (auto& v : c) v = u(rng);
  const Vector x(c);
  for (auto _ : state) benchmark::DoNotOptimize(duality_map(s, x));
}
BENCHMARK(BM_DualityMap)->Arg(4)->Arg(64)->Arg(1024);

void BM_ImplicitAffine(benchmark::State& state) {
  const auto op = ops::make_shift(SpaceInstance(4, 2.0), kQ);
  const auto sch = shifted_harmonic(1.0);
  for (auto _ : state)
    benchmark::DoNotOptimize(schemes::run_implicit_simple(op, sch, kX0, static_cast<std::size_t>(state.range(0))));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ImplicitAffine)->Arg(10'000);

void BM_ImplicitPicard(benchmark::State& state) {
  const auto op = ops::make_bounded_perturbation(SpaceInstance(4, 3.0), kQ, 0.5);
  const auto sch = shifted_harmonic(4.0);
  for (auto _ : state)
    benchmark::DoNotOptimize(schemes::run_implicit_simple(op, sch, kX0, static_cast<std::size_t>(state.range(0))));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ImplicitPicard)->Arg(10'000);

void BM_Ishikawa(benchmark::State& state) {
  const SpaceInstance s(4, 2.0);
  const auto op1 = ops::make_bounded_perturbation(s, kQ, 0.5);
  const auto op2 = ops::make_bounded_perturbation(s, kQ, 0.25, ops::Sigmoid::algebraic);
  const auto sch = shifted_harmonic(4.0);
  for (auto _ : state)
    benchmark::DoNotOptimize(schemes::run_ishikawa(op1, op2, sch, kX0, static_cast<std::size_t>(state.range(0))));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Ishikawa)->Arg(100'000);

void BM_ThetaFromPhi(benchmark::State& state) {
  auto phi = [](double t) { return t * std::exp(-t); };
  for (auto _ : state) benchmark::DoNotOptimize(ops::theta_from_phi(phi, 3.0, 0.5));
}
BENCHMARK(BM_ThetaFromPhi);

void BM_BundledScenario(benchmark::State& state) {
  const auto& entry = scenario::catalogue()[static_cast<std::size_t>(state.range(0))];
  const auto config = scenario::bundled_config(entry.id);
  state.SetLabel(std::string(entry.id));
  for (auto _ : state) benchmark::DoNotOptimize(scenario::run_scenario(config));
}
BENCHMARK(BM_BundledScenario)->DenseRange(0, 6)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

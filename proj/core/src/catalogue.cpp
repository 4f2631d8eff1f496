#include "accretia/catalogue.hpp"

#include <algorithm>
#include <stdexcept>

namespace accretia::scenario {

namespace {

// Shared geometry: R^4 with the Euclidean norm, q = (0.25, -0.5, 0, 0.5),
// x0 = q + (0.5, 0.5, 0.5, 0.5) so that ||x0 - q|| = 1.

constexpr std::string_view kImplicitShiftHarmonic = R"({
  "id": "implicit-shift-harmonic",
  "description": "Backward steps for A(x) = x - q with alpha_n = 1/(n+1).",
  "theorem": "thm42",
  "space": {"dim": 4, "p": 2},
  "operator": {"family": "shift", "q": [0.25, -0.5, 0, 0.5]},
  "x0": [0.75, 0, 0.5, 1],
  "schedule": {"alpha": {"kind": "harmonic"}},
  "modulus": {"theta": "t^2"},
  "horizon": 10000
})";

constexpr std::string_view kImplicitShiftConstant = R"({
  "id": "implicit-shift-constant",
  "description": "Backward steps for A(x) = x - q with alpha = 1 and psi = id; the residual halves each step.",
  "theorem": "rem43",
  "space": {"dim": 4, "p": 2},
  "operator": {"family": "shift", "q": [0.25, -0.5, 0, 0.5]},
  "x0": [0.5, -0.25, 0.25, 0.75],
  "schedule": {"alpha": {"kind": "constant", "value": 1}},
  "modulus": {"psi": "t"},
  "bounds": {"K": 1},
  "horizon": 200
})";

constexpr std::string_view kImplicitShiftCor44 = R"({
  "id": "implicit-shift-cor44",
  "description": "Harmonic backward steps for A(x) = x - q compared against the psi envelope.",
  "theorem": "cor44",
  "space": {"dim": 4, "p": 2},
  "operator": {"family": "shift", "q": [0.25, -0.5, 0, 0.5]},
  "x0": [0.75, 0, 0.5, 1],
  "schedule": {"alpha": {"kind": "harmonic"}},
  "modulus": {"psi": "t"},
  "horizon": 10000
})";

constexpr std::string_view kImplicitApproxThm55 = R"({
  "id": "implicit-approx-thm55",
  "description": "Backward steps for A_n(x) = x - q + h_n b with h_n = 1/(n+1)^2 and ||b|| = 1.",
  "theorem": "thm55",
  "space": {"dim": 4, "p": 2},
  "operator": {"family": "shift", "q": [0.25, -0.5, 0, 0.5]},
  "approximation": {
    "b": [0.5, 0.5, 0.5, 0.5],
    "h": "1/(n+1)^2",
    "h_rate": "t^(-0.5) - 1",
    "xi_star": "1"
  },
  "x0": [0.75, 0, 0.5, 1],
  "schedule": {"alpha": {"kind": "constant", "value": 1}},
  "modulus": {"theta": "t^2"},
  "bounds": {"K2": 1.64494},
  "horizon": 10000
})";

constexpr std::string_view kImplicitApproxThm56 = R"({
  "id": "implicit-approx-thm56",
  "description": "As implicit-approx-thm55, with boundedness derived from a summable sum of alpha_n h_n.",
  "theorem": "thm56",
  "space": {"dim": 4, "p": 2},
  "operator": {"family": "shift", "q": [0.25, -0.5, 0, 0.5]},
  "approximation": {
    "b": [0.5, 0.5, 0.5, 0.5],
    "h": "1/(n+1)^2",
    "h_rate": "t^(-0.5) - 1",
    "xi_star": "1"
  },
  "x0": [0.75, 0, 0.5, 1],
  "schedule": {"alpha": {"kind": "constant", "value": 1}},
  "modulus": {"theta": "t^2"},
  "bounds": {"K2": 1.64494},
  "horizon": 10000
})";

constexpr std::string_view kIshikawaPerturbed = R"({
  "id": "ishikawa-perturbed-thm64",
  "description": "Ishikawa iteration for A(x) = x - q + 0.5 tanh(x - q) with alpha_n = beta_n = 1/(n+4).",
  "theorem": "thm64",
  "space": {"dim": 4, "p": 2},
  "operator": {"family": "bounded-perturbation", "q": [0.25, -0.5, 0, 0.5], "lambda": 0.5, "sigmoid": "tanh"},
  "x0": [0.75, 0, 0.5, 1],
  "schedule": {
    "alpha": {"kind": "shifted-harmonic", "c": 4},
    "beta": {"kind": "shifted-harmonic", "c": 4}
  },
  "modulus": {"theta": "0.5*t^2"},
  "varpi": "t/1.5",
  "horizon": 100000
})";

constexpr std::string_view kIshikawaTwoOp = R"({
  "id": "ishikawa-two-op-hilbert",
  "description": "Two-operator Ishikawa iteration in Euclidean R^4 with tau(t) = t.",
  "theorem": "thm73",
  "space": {"dim": 4, "p": 2, "tau": "t"},
  "operator": {"family": "bounded-perturbation", "q": [0.25, -0.5, 0, 0.5], "lambda": 0.5, "sigmoid": "tanh"},
  "operator2": {"family": "bounded-perturbation", "q": [0.25, -0.5, 0, 0.5], "lambda": 0.25, "sigmoid": "algebraic"},
  "x0": [0.75, 0, 0.5, 1],
  "schedule": {
    "alpha": {"kind": "shifted-harmonic", "c": 4},
    "beta": {"kind": "shifted-harmonic", "c": 4}
  },
  "modulus": {"theta": "t^2"},
  "horizon": 100000
})";

constexpr std::string_view kNegativeBrokenRate = R"({
  "id": "negative-broken-rate",
  "description": "Negative control: the harmonic shift scenario certified against the rate 0.",
  "theorem": "thm42",
  "space": {"dim": 4, "p": 2},
  "operator": {"family": "shift", "q": [0.25, -0.5, 0, 0.5]},
  "x0": [0.75, 0, 0.5, 1],
  "schedule": {"alpha": {"kind": "harmonic"}},
  "modulus": {"theta": "t^2"},
  "rate_override": "0",
  "horizon": 10000
})";

constexpr std::string_view kNegativeWrongTheta = R"({
  "id": "negative-wrong-theta",
  "description": "Negative control: Theta_K(t) = 2 t^2 overstates the accretivity of x - q.",
  "theorem": "thm42",
  "space": {"dim": 4, "p": 2},
  "operator": {"family": "shift", "q": [0.25, -0.5, 0, 0.5]},
  "x0": [0.75, 0, 0.5, 1],
  "schedule": {"alpha": {"kind": "harmonic"}},
  "modulus": {"theta": "2*t^2"},
  "horizon": 10000
})";

constexpr CatalogueEntry kEntries[] = {
    {"implicit-shift-harmonic", Theorem::thm42, "implicit scheme, shift operator, harmonic steps",
     kImplicitShiftHarmonic},
    {"implicit-shift-constant", Theorem::rem43, "implicit scheme, psi-strong shift, unit steps",
     kImplicitShiftConstant},
    {"implicit-shift-cor44", Theorem::cor44, "implicit scheme, psi envelope",
     kImplicitShiftCor44},
    {"implicit-approx-thm55", Theorem::thm55, "implicit scheme, perturbed operators",
     kImplicitApproxThm55},
    {"implicit-approx-thm56", Theorem::thm56, "implicit scheme, summable perturbations",
     kImplicitApproxThm56},
    {"ishikawa-perturbed-thm64", Theorem::thm64, "Ishikawa scheme, uniformly continuous operator",
     kIshikawaPerturbed},
    {"ishikawa-two-op-hilbert", Theorem::thm73, "Ishikawa scheme, two operators, smooth space",
     kIshikawaTwoOp},
    {"negative-broken-rate", Theorem::thm42, "negative control, rate 0", kNegativeBrokenRate},
    {"negative-wrong-theta", Theorem::thm42, "negative control, overstated Theta",
     kNegativeWrongTheta},
};

}  // namespace

std::span<const CatalogueEntry> catalogue() { return kEntries; }

const CatalogueEntry* find_bundled(std::string_view id) {
  const auto it = std::find_if(std::begin(kEntries), std::end(kEntries),
                               [id](const CatalogueEntry& e) { return e.id == id; });
  return it == std::end(kEntries) ? nullptr : &*it;
}

ScenarioConfig bundled_config(std::string_view id) {
  const CatalogueEntry* e = find_bundled(id);
  if (!e) throw std::out_of_range("no bundled scenario '" + std::string(id) + "'");
  return parse_config(e->config);
}

}  // namespace accretia::scenario

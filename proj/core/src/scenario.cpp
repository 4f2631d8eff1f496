#include "accretia/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "accretia/expression.hpp"
#include "sampling.hpp"

namespace accretia::scenario {

using json = nlohmann::json;
using Provenance = ops::AccretivityModulus::Provenance;

namespace {

constexpr double kMargin = 1e-6;

struct TheoremInfo {
  Theorem id;
  const char* key;
  const char* label;
};

constexpr TheoremInfo kTheorems[] = {
    {Theorem::thm42, "thm42", "Thm 4.2"}, {Theorem::rem43, "rem43", "Remark 4.3"},
    {Theorem::cor44, "cor44", "Cor 4.4"}, {Theorem::thm55, "thm55", "Thm 5.5"},
    {Theorem::thm56, "thm56", "Thm 5.6"}, {Theorem::thm64, "thm64", "Thm 6.4"},
    {Theorem::thm73, "thm73", "Thm 7.3"},
};

bool is_ishikawa(Theorem t) { return t == Theorem::thm64 || t == Theorem::thm73; }
bool is_approx(Theorem t) { return t == Theorem::thm55 || t == Theorem::thm56; }

double with_margin(double x) { return x > 0.0 ? x * (1.0 + kMargin) : kMargin; }

// ---------------------------------------------------------------------------
// Config reading

class Source {
public:
  explicit Source(std::string_view text) : text_(text) {}

  // Best-effort line of the key addressed by a JSON pointer: each object key
  // is searched for after the position of its parent.
  std::optional<std::size_t> line_of(const std::string& pointer) const {
    std::size_t pos = 0;
    bool found = false;
    std::stringstream ss(pointer);
    std::string token;
    while (std::getline(ss, token, '/')) {
      if (token.empty() || std::all_of(token.begin(), token.end(), ::isdigit)) continue;
      const auto at = text_.find('"' + token + '"', pos);
      if (at == std::string_view::npos) break;
      pos = at;
      found = true;
    }
    if (!found) return std::nullopt;
    return 1 + static_cast<std::size_t>(std::count(text_.begin(), text_.begin() + pos, '\n'));
  }

  [[noreturn]] void fail(const std::string& pointer, const std::string& what) const {
    throw SchemaError(what, pointer, line_of(pointer));
  }

private:
  std::string_view text_;
};

class Object {
public:
  Object(const json& j, std::string pointer, const Source& src)
      : j_(j), ptr_(std::move(pointer)), src_(src) {
    if (!j_.is_object()) src_.fail(ptr_, "expected an object");
  }

  void allow(std::initializer_list<const char*> keys) const {
    for (const auto& [k, v] : j_.items()) {
      if (std::none_of(keys.begin(), keys.end(), [&](const char* a) { return k == a; }))
        src_.fail(ptr_ + "/" + k, "unknown key '" + k + "'");
    }
  }

  [[nodiscard]] bool has(const char* key) const { return j_.contains(key); }
  [[nodiscard]] std::string path(const char* key) const { return ptr_ + "/" + key; }
  [[nodiscard]] const Source& source() const { return src_; }

  const json& require(const char* key) const {
    if (!j_.contains(key)) src_.fail(ptr_.empty() ? "/" : ptr_, std::string("missing '") + key + "'");
    return j_.at(key);
  }

  Object object(const char* key) const { return {require(key), path(key), src_}; }

  std::string string(const char* key) const {
    const json& v = require(key);
    if (!v.is_string()) src_.fail(path(key), "expected a string");
    return v.get<std::string>();
  }

  double number(const char* key) const {
    const json& v = require(key);
    if (!v.is_number()) src_.fail(path(key), "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) src_.fail(path(key), "expected a finite number");
    return d;
  }

  double positive(const char* key) const {
    const double d = number(key);
    if (!(d > 0.0)) src_.fail(path(key), "expected a positive number");
    return d;
  }

  std::size_t count(const char* key) const {
    const json& v = require(key);
    if (!v.is_number_unsigned()) src_.fail(path(key), "expected a nonnegative integer");
    return v.get<std::size_t>();
  }

  std::vector<double> numbers(const char* key) const {
    const json& v = require(key);
    if (!v.is_array()) src_.fail(path(key), "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) src_.fail(path(key) + "/" + std::to_string(i), "expected a number");
      out.push_back(v[i].get<double>());
      if (!std::isfinite(out.back()))
        src_.fail(path(key) + "/" + std::to_string(i), "expected a finite number");
    }
    return out;
  }

  // Expression in the given variables; parsed once here to reject bad input early.
  std::string expression(const char* key, std::vector<std::string> vars) const {
    std::string text = string(key);
    try {
      Expression e(text, std::move(vars));
    } catch (const ExpressionError& err) {
      src_.fail(path(key), err.what());
    }
    return text;
  }

  template <class T, class F>
  std::optional<T> optional(const char* key, F&& read) const {
    if (!has(key)) return std::nullopt;
    return read(key);
  }

private:
  const json& j_;
  std::string ptr_;
  const Source& src_;
};

SequenceSpec read_sequence(const Object& o) {
  o.allow({"kind", "value", "c", "expr"});
  SequenceSpec s;
  const std::string kind = o.string("kind");
  if (kind == "constant") {
    s.kind = SequenceSpec::Kind::constant;
    s.value = o.number("value");
    if (s.value < 0.0) o.source().fail(o.path("value"), "expected a nonnegative number");
  } else if (kind == "harmonic") {
    s.kind = SequenceSpec::Kind::harmonic;
  } else if (kind == "shifted-harmonic") {
    s.kind = SequenceSpec::Kind::shifted_harmonic;
    s.shift = o.positive("c");
  } else if (kind == "expr") {
    s.kind = SequenceSpec::Kind::expr;
    s.expr = o.expression("expr", {"n"});
  } else {
    o.source().fail(o.path("kind"), "unknown sequence kind '" + kind + "'");
  }
  return s;
}

OperatorSpec read_operator(const Object& o, std::size_t dim) {
  o.allow({"family", "q", "diag", "lambda", "sigmoid"});
  OperatorSpec s;
  s.family = o.string("family");
  s.q = o.numbers("q");
  if (s.q.size() != dim) o.source().fail(o.path("q"), "length does not match space.dim");
  if (s.family == "shift") {
  } else if (s.family == "diagonal") {
    s.diag = o.numbers("diag");
    if (s.diag.size() != dim) o.source().fail(o.path("diag"), "length does not match space.dim");
    for (double d : s.diag)
      if (!(d > 0.0)) o.source().fail(o.path("diag"), "entries must be positive");
  } else if (s.family == "bounded-perturbation") {
    s.lambda = o.number("lambda");
    if (!(s.lambda >= 0.0 && s.lambda <= 0.5))
      o.source().fail(o.path("lambda"), "must lie in [0, 0.5]");
    if (o.has("sigmoid")) {
      try {
        s.sigmoid = ops::sigmoid_from_string(o.string("sigmoid"));
      } catch (const std::invalid_argument& e) {
        o.source().fail(o.path("sigmoid"), e.what());
      }
    }
  } else {
    o.source().fail(o.path("family"), "unknown operator family '" + s.family + "'");
  }
  return s;
}

ScenarioConfig read_config(const json& root, const Source& src) {
  const Object o(root, "", src);
  o.allow({"id", "description", "theorem", "space", "operator", "operator2", "approximation",
           "x0", "schedule", "modulus", "varpi", "bounds", "horizon", "eps_grid",
           "rate_override", "verify_samples", "output"});
  ScenarioConfig c;
  c.id = o.string("id");
  if (c.id.empty()) src.fail("/id", "must not be empty");
  if (o.has("description")) c.description = o.string("description");
  const std::string theorem = o.string("theorem");
  const auto t = theorem_from_string(theorem);
  if (!t) src.fail("/theorem", "unknown theorem selector '" + theorem + "'");
  c.theorem = *t;

  const Object space = o.object("space");
  space.allow({"dim", "p", "tau"});
  c.dim = space.count("dim");
  if (c.dim == 0) src.fail("/space/dim", "must be positive");
  c.p = space.number("p");
  if (!(c.p > 1.0)) src.fail("/space/p", "must exceed 1");
  if (space.has("tau")) c.tau = space.expression("tau", {"t"});

  c.op = read_operator(o.object("operator"), c.dim);
  if (o.has("operator2")) c.op2 = read_operator(o.object("operator2"), c.dim);

  if (o.has("approximation")) {
    const Object a = o.object("approximation");
    a.allow({"b", "h", "h_rate", "xi_star"});
    ApproximationSpec s;
    s.b = a.numbers("b");
    if (s.b.size() != c.dim) src.fail(a.path("b"), "length does not match space.dim");
    s.h = a.expression("h", {"n"});
    s.h_rate = a.expression("h_rate", {"t"});
    s.xi_star = a.expression("xi_star", {"t"});
    c.approximation = std::move(s);
  }

  c.x0 = o.numbers("x0");
  if (c.x0.size() != c.dim) src.fail("/x0", "length does not match space.dim");

  const Object sched = o.object("schedule");
  sched.allow({"alpha", "beta", "divergence", "joint_rate"});
  c.schedule.alpha = read_sequence(sched.object("alpha"));
  if (sched.has("beta")) c.schedule.beta = read_sequence(sched.object("beta"));
  if (sched.has("divergence")) {
    const Object d = sched.object("divergence");
    d.allow({"f", "bound"});
    c.schedule.divergence = DivergenceSpec{d.expression("f", {"t"}), d.positive("bound")};
  }
  if (sched.has("joint_rate")) c.schedule.joint_rate = sched.expression("joint_rate", {"t"});
  if (c.schedule.alpha.kind == SequenceSpec::Kind::expr && !c.schedule.divergence)
    src.fail("/schedule", "an expression alpha needs schedule.divergence");
  if (c.schedule.alpha.kind == SequenceSpec::Kind::constant && c.schedule.alpha.value <= 0.0 &&
      !c.schedule.divergence)
    src.fail("/schedule/alpha/value", "a zero constant schedule does not diverge");

  const Object mod = o.object("modulus");
  mod.allow({"theta", "psi", "phi"});
  const int given = int(mod.has("theta")) + int(mod.has("psi")) + int(mod.has("phi"));
  if (given != 1) src.fail("/modulus", "give exactly one of theta, psi, phi");
  if (mod.has("theta")) {
    c.modulus = {Provenance::direct, mod.expression("theta", {"K", "t"})};
  } else if (mod.has("psi")) {
    c.modulus = {Provenance::from_psi, mod.expression("psi", {"t"})};
  } else {
    c.modulus = {Provenance::from_phi, mod.expression("phi", {"t"})};
  }

  if (o.has("varpi")) c.varpi = o.expression("varpi", {"t"});

  if (o.has("bounds")) {
    const Object b = o.object("bounds");
    b.allow({"K", "K_prime", "K0", "K1", "K2"});
    auto pos = [&](const char* k) { return b.positive(k); };
    c.bounds.big_k = b.optional<double>("K", pos);
    c.bounds.k_prime = b.optional<double>("K_prime", pos);
    c.bounds.k0 = b.optional<double>("K0", pos);
    c.bounds.k1 = b.optional<double>("K1", pos);
    c.bounds.k2 = b.optional<double>("K2", pos);
  }

  if (o.has("horizon")) {
    c.horizon = o.count("horizon");
    if (*c.horizon == 0) src.fail("/horizon", "must be at least 1");
  }
  if (o.has("eps_grid")) {
    c.eps_grid = o.numbers("eps_grid");
    if (c.eps_grid.empty()) src.fail("/eps_grid", "must not be empty");
    for (double e : c.eps_grid)
      if (!(e > 0.0)) src.fail("/eps_grid", "entries must be positive");
  } else {
    c.eps_grid = certify::default_eps_grid();
  }
  if (o.has("rate_override")) c.rate_override = o.expression("rate_override", {"t"});
  if (o.has("verify_samples")) c.verify_samples = o.count("verify_samples");
  if (o.has("output")) {
    const Object out = o.object("output");
    out.allow({"dir"});
    c.output_dir = out.string("dir");
  }

  // Theorem-specific requirements.
  const bool psi = c.modulus.kind == Provenance::from_psi;
  switch (c.theorem) {
    case Theorem::rem43:
    case Theorem::cor44:
      if (!psi) src.fail("/modulus", "this theorem needs a psi modulus");
      break;
    case Theorem::thm55:
    case Theorem::thm56:
      if (!c.approximation) src.fail("/", "this theorem needs 'approximation'");
      if (c.theorem == Theorem::thm56 && !c.bounds.k2)
        src.fail("/bounds", "this theorem needs bounds.K2");
      if (c.theorem == Theorem::thm55 && !c.bounds.big_k && !c.bounds.k2)
        src.fail("/bounds", "this theorem needs bounds.K or bounds.K2");
      break;
    case Theorem::thm64:
      if (!c.varpi) src.fail("/", "this theorem needs 'varpi'");
      if (c.op2) src.fail("/operator2", "this theorem takes a single operator");
      break;
    case Theorem::thm73:
      if (!c.op2) src.fail("/", "this theorem needs 'operator2'");
      if (!c.tau) src.fail("/space", "this theorem needs space.tau");
      break;
    case Theorem::thm42:
      break;
  }
  if (is_ishikawa(c.theorem) && !c.schedule.beta)
    src.fail("/schedule", "an Ishikawa scheme needs schedule.beta");
  if (!is_ishikawa(c.theorem) && c.schedule.beta)
    src.fail("/schedule/beta", "only Ishikawa schemes take a beta schedule");
  if (!is_ishikawa(c.theorem) && c.op2)
    src.fail("/operator2", "only Ishikawa schemes take a second operator");
  if (!is_approx(c.theorem) && c.approximation)
    src.fail("/approximation", "only approximation schemes take 'approximation'");
  return c;
}

// ---------------------------------------------------------------------------
// Building blocks

std::function<double(std::size_t)> make_sequence(const SequenceSpec& s) {
  switch (s.kind) {
    case SequenceSpec::Kind::constant:
      return [v = s.value](std::size_t) { return v; };
    case SequenceSpec::Kind::harmonic:
      return [](std::size_t n) { return 1.0 / (static_cast<double>(n) + 1.0); };
    case SequenceSpec::Kind::shifted_harmonic:
      return [c = s.shift](std::size_t n) { return 1.0 / (static_cast<double>(n) + c); };
    case SequenceSpec::Kind::expr:
      return [e = Expression(s.expr, {"n"})](std::size_t n) { return e(static_cast<double>(n)); };
  }
  return {};
}

std::function<double(double)> make_unary(const std::string& text) {
  return unary_function(Expression(text, {"t"}));
}

Index index_of(double v) {
  if (std::isnan(v)) throw std::domain_error("rate expression evaluated to NaN");
  return ceil_index(v);
}

rates::RateOfConvergence rate_from_expr(const std::string& text) {
  return rates::RateOfConvergence(
      [e = Expression(text, {"t"})](double t) { return index_of(e(t)); });
}

// Witness for 1/(n + c): sum_{i<=m} 1/(i+c) >= log((m+1+c)/c) >= t once m >= c e^t.
rates::RateOfDivergence shifted_harmonic_divergence(double c) {
  return rates::divergence_from_simple([c](double t) { return index_of(c * std::exp(t)); },
                                       1.0 / c);
}

rates::RateOfDivergence make_divergence(const ScheduleSpec& s) {
  if (s.divergence) {
    return rates::divergence_from_simple(
        [e = Expression(s.divergence->f, {"t"})](double t) { return index_of(e(t)); },
        s.divergence->bound);
  }
  switch (s.alpha.kind) {
    case SequenceSpec::Kind::constant:
      return rates::divergence_for_lower_bound(s.alpha.value);
    case SequenceSpec::Kind::harmonic:
      return shifted_harmonic_divergence(1.0);
    case SequenceSpec::Kind::shifted_harmonic:
      return shifted_harmonic_divergence(s.alpha.shift);
    case SequenceSpec::Kind::expr:
      break;
  }
  throw std::logic_error("no divergence witness for an expression schedule");
}

std::optional<double> harmonic_shift(const SequenceSpec& s) {
  if (s.kind == SequenceSpec::Kind::harmonic) return 1.0;
  if (s.kind == SequenceSpec::Kind::shifted_harmonic) return s.shift;
  return std::nullopt;
}

rates::RateOfConvergence make_joint_rate(const ScheduleSpec& s) {
  if (s.joint_rate) return rate_from_expr(*s.joint_rate);
  auto c = harmonic_shift(s.alpha);
  if (c && s.beta) {
    const auto cb = harmonic_shift(*s.beta);
    c = cb ? std::optional<double>(std::min(*c, *cb)) : std::nullopt;
  }
  if (!c) return {};
  // max(alpha_n, beta_n) = 1/(n + c) <= t once n >= 1/t - c.
  return rates::RateOfConvergence([c = *c](double t) { return index_of(1.0 / t - c); });
}

ops::OperatorInstance make_operator(const SpaceInstance& space, const OperatorSpec& s) {
  Vector q(s.q);
  if (s.family == "shift") return ops::make_shift(space, q);
  if (s.family == "diagonal") return ops::make_diagonal(space, q, s.diag);
  return ops::make_bounded_perturbation(space, q, s.lambda, s.sigmoid);
}

ops::AccretivityModulus make_modulus(const ModulusSpec& m) {
  switch (m.kind) {
    case Provenance::from_psi:
      return ops::modulus_from_psi(make_unary(m.expr));
    case Provenance::from_phi:
      return ops::modulus_from_phi(make_unary(m.expr));
    case Provenance::direct:
      break;
  }
  return ops::modulus_direct(
      [e = Expression(m.expr, {"K", "t"})](double k, double t) { return e(k, t); });
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

Check make_check(std::string name, bool passed, std::string detail) {
  return {std::move(name), passed, std::move(detail)};
}

// Largest ||A_n x - A x|| / (h_n xi_star(||x||)) over sampled x and a few n.
double approximation_ratio(const ops::ApproximationData& data, const ops::OperatorInstance& base,
                           double radius, std::size_t samples, std::uint64_t seed) {
  detail::Rng rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0.0;
  const std::size_t steps[] = {0, 1, 2, 5, 10, 100, 1000};
  for (std::size_t i = 0; i < samples; ++i) {
    const Vector x = axpy(base.zero, radius * unit(rng), detail::random_unit(rng, base.space));
    const std::size_t n = steps[i % std::size(steps)];
    const double h = data.h_seq(n);
    const double gap = distance(base.space, data.family(n).select(x), base.select(x));
    if (gap == 0.0) continue;
    const double allowed = h * data.xi_star(std::max(norm(base.space, x), 1e-300));
    worst = std::max(worst, allowed > 0.0 ? gap / allowed : std::numeric_limits<double>::infinity());
  }
  return worst;
}

}  // namespace

// ---------------------------------------------------------------------------

std::string to_string(Theorem t) {
  for (const auto& info : kTheorems)
    if (info.id == t) return info.key;
  return "thm42";
}

std::optional<Theorem> theorem_from_string(std::string_view s) {
  for (const auto& info : kTheorems)
    if (s == info.key) return info.id;
  return std::nullopt;
}

std::string theorem_label(Theorem t) {
  for (const auto& info : kTheorems)
    if (info.id == t) return info.label;
  return {};
}

ScenarioConfig parse_config(std::string_view json_text) {
  const Source src(json_text);
  json root;
  try {
    root = json::parse(json_text.begin(), json_text.end());
  } catch (const json::parse_error& e) {
    // nlohmann reports a byte offset; turn it into a line.
    const std::size_t at = std::min<std::size_t>(e.byte, json_text.size());
    const std::size_t line =
        1 + static_cast<std::size_t>(std::count(json_text.begin(), json_text.begin() + at, '\n'));
    throw SchemaError("malformed JSON", "", line);
  }
  return read_config(root, src);
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError("cannot read config file " + path.string(), "", std::nullopt);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::size_t default_horizon(Theorem t) { return is_ishikawa(t) ? 100'000 : 10'000; }

bool ScenarioReport::ok() const {
  if (rejection) return false;
  if (std::any_of(checks.begin(), checks.end(), [](const Check& c) { return !c.passed; }))
    return false;
  return certification && !certification->any_failed();
}

ExitCode exit_code(const ScenarioReport& report) {
  return report.ok() ? ExitCode::ok : ExitCode::failed;
}

ScenarioReport run_scenario(const ScenarioConfig& config, const RunOptions& options) {
  ScenarioReport report;
  report.scenario_id = config.id;
  report.theorem = config.theorem;
  report.horizon = options.horizon.value_or(config.horizon.value_or(default_horizon(config.theorem)));
  report.seed = options.seed;
  const std::vector<double>& grid = options.eps_grid ? *options.eps_grid : config.eps_grid;
  const std::size_t samples = config.verify_samples;
  const std::uint64_t seed = options.seed;
  const Theorem thm = config.theorem;

  std::optional<SmoothnessModulus> tau;
  if (config.tau) tau = SmoothnessModulus{make_unary(*config.tau), *config.tau};
  const SpaceInstance space(config.dim, config.p, tau);

  const ops::OperatorInstance op1 = make_operator(space, config.op);
  const ops::OperatorInstance op2 = config.op2 ? make_operator(space, *config.op2) : op1;
  const Vector& q = op1.zero;
  const Vector x0(config.x0);

  schemes::ScalarSchedule schedule;
  schedule.alpha = make_sequence(config.schedule.alpha);
  if (config.schedule.beta) schedule.beta = make_sequence(*config.schedule.beta);
  schedule.r = make_divergence(config.schedule);
  schedule.joint_rate = make_joint_rate(config.schedule);
  if (is_ishikawa(thm) && !schedule.joint_rate)
    throw SchemaError("this theorem needs schedule.joint_rate", "/schedule", std::nullopt);

  const ops::AccretivityModulus theta = make_modulus(config.modulus);

  std::optional<ops::ApproximationData> approx;
  if (config.approximation) {
    const auto& a = *config.approximation;
    ops::ApproximationData d;
    d.h_seq = [e = Expression(a.h, {"n"})](std::size_t n) { return e(static_cast<double>(n)); };
    d.family = [op1, h = d.h_seq, b = Vector(a.b)](std::size_t n) {
      return ops::perturb(op1, h(n), b);
    };
    d.h_rate = rate_from_expr(a.h_rate);
    d.xi_star = make_unary(a.xi_star);
    d.partial_alpha_h_bound = config.bounds.k2;
    approx = std::move(d);
  }

  // Bounds.
  const double start_gap = distance(space, x0, q);
  ResolvedBounds& b = report.bounds;
  if (is_ishikawa(thm)) {
    double range = 0.0;
    for (const auto* op : {&op1, &op2}) {
      if (!op->range_bound && !config.bounds.k0)
        throw SchemaError("operator range is not known to be bounded; give bounds.K0", "/bounds",
                          std::nullopt);
      range = std::max(range, op->range_bound.value_or(0.0));
    }
    b.k0 = config.bounds.k0.value_or(range);
    b.k1 = config.bounds.k1.value_or(with_margin(start_gap));
    b.big_k = config.bounds.big_k.value_or(schemes::ishikawa_bound(*b.k0, *b.k1));
  } else if (is_approx(thm)) {
    b.k0 = config.bounds.k0.value_or(with_margin(start_gap));
    b.k1 = config.bounds.k1.value_or(config.bounds.k_prime.value_or(with_margin(norm(space, q))));
    b.k_prime = config.bounds.k_prime.value_or(*b.k1);
    b.k2 = config.bounds.k2;
    if (config.bounds.big_k)
      b.big_k = *config.bounds.big_k;
    else
      b.big_k = schemes::approx_bound(*b.k0, *b.k2, approx->xi_star(*b.k1));
  } else {
    b.big_k = config.bounds.big_k.value_or(with_margin(start_gap));
  }
  const double big_k = b.big_k;

  auto reject = [&](const std::string& why) {
    if (!report.rejection) report.rejection = why;
  };
  auto record = [&](Check c, bool rejects) {
    if (!c.passed && rejects) reject(c.name + ": " + c.detail);
    report.checks.push_back(std::move(c));
  };

  // Hypotheses that can be checked before iterating.
  {
    const double upper = thm == Theorem::thm64 ? 0.5
                         : thm == Theorem::thm73 ? 1.0
                                                 : std::numeric_limits<double>::infinity();
    const auto issues = schemes::validate_schedule(schedule, report.horizon, upper);
    record(make_check("schedule", issues.empty(),
                      issues.empty() ? "alpha/beta within range up to the horizon"
                                     : "n = " + std::to_string(issues.front().n) + ": " +
                                           issues.front().what),
           true);
  }
  {
    const auto acc = ops::verify_accretive_at_zero(op1, theta, big_k, samples, seed);
    std::string detail = std::to_string(acc.checked) + " samples";
    if (!acc.ok()) {
      const auto& v = acc.violations.front();
      detail += ", " + std::to_string(acc.violations.size()) + " violations; first at ||x-q|| = " +
                fmt(v.distance) + ": pairing " + fmt(v.pairing) + " < Theta = " + fmt(v.required);
    }
    record(make_check("accretivity", acc.ok(), detail), true);
  }
  if (start_gap >= big_k && !is_approx(thm) && !is_ishikawa(thm))
    record(make_check("initial-gap", false, "||x0 - q|| = " + fmt(start_gap) + " >= K"), true);
  if (is_ishikawa(thm)) {
    record(make_check("initial-gap", start_gap < *b.k1,
                      "||x0 - q|| = " + fmt(start_gap) + ", K1 = " + fmt(*b.k1)),
           true);
    double seen = 0.0;
    for (const auto* op : {&op1, &op2})
      seen = std::max(seen, ops::sample_range_norm(*op, 2.0 * big_k, samples, seed));
    record(make_check("range-bound", seen < *b.k0,
                      "sampled max ||(I-A)x|| = " + fmt(seen) + ", K0 = " + fmt(*b.k0)),
           true);
    if (!(distance(space, op1.zero, op2.zero) <= kIdentitySlack))
      record(make_check("common-zero", false, "operators do not share a zero"), true);
  }
  if (thm == Theorem::thm64) {
    const auto cont =
        ops::verify_uniform_continuity(op1, ops::ContinuityModulus{make_unary(*config.varpi)},
                                       2.0 * big_k, samples, seed);
    record(make_check("continuity", cont.ok(),
                      std::to_string(cont.checked) + " pairs, " +
                          std::to_string(cont.violations.size()) + " violations"),
           true);
  }
  if (thm == Theorem::thm73) {
    const auto smooth = validate_smoothness(space, *tau, std::max<std::size_t>(samples, 10'000), seed);
    record(make_check("smoothness", smooth.ok(),
                      std::to_string(smooth.samples) + " samples, " +
                          std::to_string(smooth.violations.size()) + " violations"),
           true);
  }
  if (approx) {
    record(make_check("K-prime", norm(space, q) < *b.k_prime,
                      "||q|| = " + fmt(norm(space, q)) + ", K' = " + fmt(*b.k_prime)),
           true);
    const double ratio = approximation_ratio(*approx, op1, big_k + *b.k1, samples, seed);
    record(make_check("approximation", ratio <= 1.0 + 1e-9,
                      "max ||A_n x - A x|| / (h_n xi*(||x||)) = " + fmt(ratio)),
           true);
    std::vector<double> xi_grid;
    for (int k = -10; k <= 10; ++k) xi_grid.push_back(std::ldexp(1.0, k));
    const auto mono = ops::xi_star_monotonicity_violations(*approx, xi_grid);
    record(make_check("xi-star-monotone", mono.empty(),
                      std::to_string(mono.size()) + " decreasing grid steps"),
           true);
    if (thm == Theorem::thm56)
      record(make_check("initial-gap", start_gap < *b.k0,
                        "||x0 - q|| = " + fmt(start_gap) + ", K0 = " + fmt(*b.k0)),
             true);
  }

  // The rate under test.
  rates::RateOfConvergence rate;
  if (config.rate_override) {
    rate = rate_from_expr(*config.rate_override);
  } else {
    switch (thm) {
      case Theorem::thm42:
        rate = schemes::rate_implicit_simple(theta, schedule.r, big_k);
        break;
      case Theorem::rem43:
      case Theorem::cor44:
        rate = schemes::rate_psi(theta.psi, schedule.r, big_k);
        break;
      case Theorem::thm55:
        rate = schemes::rate_implicit_approx(
            theta, [data = *approx](double l, double e) { return ops::mu_from_approx(data, l, e); },
            schedule.r, big_k, *b.k_prime);
        break;
      case Theorem::thm56:
        rate = schemes::rate_implicit_approx_summable(theta, approx->h_rate, approx->xi_star,
                                                      schedule.r, *b.k0, *b.k1, *b.k2);
        break;
      case Theorem::thm64:
        rate = schemes::rate_ishikawa_continuous(theta,
                                                 ops::ContinuityModulus{make_unary(*config.varpi)},
                                                 schedule.joint_rate, schedule.r, *b.k0, *b.k1);
        break;
      case Theorem::thm73:
        rate = schemes::rate_ishikawa_smooth(theta, *tau, schedule.joint_rate, schedule.r, *b.k0,
                                             *b.k1);
        break;
    }
  }
  if (thm == Theorem::rem43 && !config.rate_override) {
    const auto general = schemes::rate_implicit_simple(theta, schedule.r, big_k);
    std::size_t worse = 0;
    for (double e : grid)
      if (rate(e) > general(e)) ++worse;
    record(make_check("psi-rate-dominance", worse == 0,
                      std::to_string(worse) + " grid points where the psi rate is larger"),
           false);
  }

  if (report.rejection) return report;

  // Iterate.
  schemes::IterationTrace trace;
  if (is_ishikawa(thm)) {
    trace = schemes::run_ishikawa(op1, op2, schedule, x0, report.horizon);
  } else if (approx) {
    trace = schemes::run_implicit_approx(*approx, q, schedule, x0, report.horizon);
  } else {
    trace = schemes::run_implicit_simple(op1, schedule, x0, report.horizon);
  }

  // Trace-level checks.
  const double peak = *std::max_element(trace.residuals.begin(), trace.residuals.end());
  record(make_check("boundedness", peak < big_k + kIdentitySlack,
                    "max ||x_n - q|| = " + fmt(peak) + ", K = " + fmt(big_k)),
         true);
  if (is_ishikawa(thm)) {
    double seen = 0.0;
    for (const auto* vs : {&trace.us, &trace.vs})
      for (const auto& w : *vs) seen = std::max(seen, norm(space, w));
    record(make_check("range-bound-trace", seen < *b.k0,
                      "max ||u_n||, ||v_n|| = " + fmt(seen) + ", K0 = " + fmt(*b.k0)),
           true);
    const auto steps = schemes::check_ishikawa_steps(trace, space, big_k);
    record(make_check("ishikawa-steps", steps.ok(),
                      std::to_string(steps.bound_violations.size()) + " bound and " +
                          std::to_string(steps.gap_violations.size()) +
                          " gap violations; max gap ratio " + fmt(steps.max_gap_ratio)),
           false);
  } else {
    const double defect =
        approx ? schemes::implicit_fidelity(trace, space, approx->family)
               : schemes::implicit_fidelity(trace, space, [&](std::size_t) { return op1; });
    record(make_check("implicit-fidelity", defect <= schemes::kImplicitTolerance,
                      "max relative defect " + fmt(defect)),
           false);
  }
  if (approx && b.k2) {
    double s = 0.0;
    double peak_sum = 0.0;
    for (std::size_t n = 0; n <= report.horizon; ++n) {
      s += trace.alphas[n] * approx->h_seq(n);
      peak_sum = std::max(peak_sum, s);
    }
    record(make_check("partial-sum-bound", peak_sum < *b.k2,
                      "max sum alpha_i h_i = " + fmt(peak_sum) + ", K2 = " + fmt(*b.k2)),
           true);
  }
  if (thm == Theorem::cor44) {
    auto env = schemes::envelope_cor44(theta.psi, big_k, trace.alphas);
    std::size_t bad = 0;
    std::size_t first_bad = 0;
    for (std::size_t n = env.valid_from(); n < trace.residuals.size(); ++n) {
      if (!(trace.residuals[n] < env.bound[n] + kIdentitySlack)) {
        if (bad++ == 0) first_bad = n;
      }
    }
    record(make_check("envelope", bad == 0,
                      "n0 = " + std::to_string(env.n0) + ", " + std::to_string(bad) +
                          " violations" + (bad ? " from n = " + std::to_string(first_bad) : "")),
           false);
    report.envelope = std::move(env);
  }

  report.certification = certify::certify(trace, rate, grid, config.id);
  report.trace = std::move(trace);
  return report;
}

}  // namespace accretia::scenario

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "accretia/certify.hpp"
#include "accretia/operators.hpp"
#include "accretia/schemes.hpp"

namespace accretia::scenario {

/// Config rejected by the schema. `line` is 1-based when the offending key
/// could be located in the source text.
class SchemaError : public std::runtime_error {
public:
  SchemaError(const std::string& what, std::string pointer, std::optional<std::size_t> line)
      : std::runtime_error(format(what, pointer, line)), pointer_(std::move(pointer)), line_(line) {}

  [[nodiscard]] const std::string& pointer() const noexcept { return pointer_; }
  [[nodiscard]] std::optional<std::size_t> line() const noexcept { return line_; }

private:
  static std::string format(const std::string& what, const std::string& pointer,
                            std::optional<std::size_t> line) {
    std::string s = line ? "line " + std::to_string(*line) + ": " : std::string();
    if (!pointer.empty()) s += pointer + ": ";
    return s + what;
  }
  std::string pointer_;
  std::optional<std::size_t> line_;
};

enum class Theorem { thm42, rem43, cor44, thm55, thm56, thm64, thm73 };

std::string to_string(Theorem t);
std::optional<Theorem> theorem_from_string(std::string_view s);
/// Human-readable label used in listings, e.g. "Thm 4.2".
std::string theorem_label(Theorem t);

struct SequenceSpec {
  enum class Kind { constant, harmonic, shifted_harmonic, expr };
  Kind kind = Kind::harmonic;
  double value = 0.0;  ///< constant
  double shift = 1.0;  ///< shifted-harmonic: 1/(n + shift)
  std::string expr;    ///< expr, in the variable n
};

/// Classical witness f with sum_{i<=f(t)} alpha_i >= t, alpha_i <= bound.
struct DivergenceSpec {
  std::string f;  ///< in the variable t
  double bound = 1.0;
};

struct ScheduleSpec {
  SequenceSpec alpha;
  std::optional<SequenceSpec> beta;
  std::optional<DivergenceSpec> divergence;
  std::optional<std::string> joint_rate;  ///< in t, rate for max(alpha_n, beta_n) -> 0
};

struct OperatorSpec {
  std::string family;  ///< shift | diagonal | bounded-perturbation
  std::vector<double> q;
  std::vector<double> diag;
  double lambda = 0.0;
  ops::Sigmoid sigmoid = ops::Sigmoid::tanh;
};

/// A_n(x) = A(x) + h_n b.
struct ApproximationSpec {
  std::vector<double> b;
  std::string h;        ///< in n
  std::string h_rate;   ///< in t
  std::string xi_star;  ///< in t
};

struct ModulusSpec {
  ops::AccretivityModulus::Provenance kind = ops::AccretivityModulus::Provenance::direct;
  std::string expr;  ///< theta: variables K and t; psi, phi: variable t
};

struct BoundSpec {
  std::optional<double> big_k;
  std::optional<double> k_prime;
  std::optional<double> k0;
  std::optional<double> k1;
  std::optional<double> k2;
};

struct ScenarioConfig {
  std::string id;
  std::string description;
  Theorem theorem = Theorem::thm42;
  std::size_t dim = 0;
  double p = 2.0;
  std::optional<std::string> tau;  ///< in t
  OperatorSpec op;
  std::optional<OperatorSpec> op2;
  std::optional<ApproximationSpec> approximation;
  std::vector<double> x0;
  ScheduleSpec schedule;
  ModulusSpec modulus;
  std::optional<std::string> varpi;  ///< in t
  BoundSpec bounds;
  std::optional<std::size_t> horizon;
  std::vector<double> eps_grid;
  std::optional<std::string> rate_override;  ///< in t, replaces the theorem's rate
  std::size_t verify_samples = 2000;
  std::optional<std::string> output_dir;
};

/// Parses and validates a JSON config. Throws SchemaError.
ScenarioConfig parse_config(std::string_view json_text);
ScenarioConfig load_config(const std::filesystem::path& path);

/// 10^4 for implicit schemes, 10^5 for explicit ones.
std::size_t default_horizon(Theorem t);

struct Check {
  std::string name;
  bool passed = true;
  std::string detail;
};

/// Bounds after defaults have been filled in.
struct ResolvedBounds {
  double big_k = 0.0;
  std::optional<double> k_prime;
  std::optional<double> k0;
  std::optional<double> k1;
  std::optional<double> k2;
};

struct ScenarioReport {
  std::string scenario_id;
  Theorem theorem = Theorem::thm42;
  std::size_t horizon = 0;
  std::uint64_t seed = 0;
  ResolvedBounds bounds;
  std::vector<Check> checks;
  /// Set when a declared hypothesis was refuted; certification is then skipped
  /// if the refutation happened before iteration.
  std::optional<std::string> rejection;
  std::optional<certify::CertificationReport> certification;
  std::optional<schemes::IterationTrace> trace;
  std::optional<schemes::Cor44Envelope> envelope;

  [[nodiscard]] bool ok() const;
};

enum class ExitCode : int { ok = 0, failed = 1, schema = 2, solver = 3 };

ExitCode exit_code(const ScenarioReport& report);

struct RunOptions {
  std::optional<std::size_t> horizon;
  std::optional<std::vector<double>> eps_grid;
  std::uint64_t seed = 0x5eed;
};

/// Builds space, operators, schedule and rate; verifies the sampled hypotheses;
/// iterates; checks trace-level bounds; certifies. Throws SchemaError when the
/// config is inconsistent and schemes::SolverError when a step cannot be solved.
ScenarioReport run_scenario(const ScenarioConfig& config, const RunOptions& options = {});

}  // namespace accretia::scenario

// accretia: run bundled or user-supplied convergence scenarios and certify
// their rates.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "accretia/catalogue.hpp"
#include "accretia/expression.hpp"
#include "accretia/report_io.hpp"
#include "accretia/scenario.hpp"

namespace fs = std::filesystem;
using namespace accretia;
using scenario::ExitCode;

namespace {

struct Common {
  std::optional<std::size_t> horizon;
  std::optional<std::string> out;
  std::uint64_t seed = 0x5eed;
};

int code(ExitCode c) { return static_cast<int>(c); }

// A path that exists wins over a bundled id of the same name.
scenario::ScenarioConfig resolve_config(const std::string& ref) {
  if (fs::exists(ref)) return scenario::load_config(ref);
  if (scenario::find_bundled(ref)) return scenario::bundled_config(ref);
  throw scenario::SchemaError("no such config file or bundled scenario '" + ref + "'", "",
                              std::nullopt);
}

std::optional<fs::path> output_dir(const Common& common, const scenario::ScenarioConfig& config) {
  if (const char* env = std::getenv("ACCRETIA_OUT"); env && *env) return fs::path(env);
  if (common.out) return fs::path(*common.out);
  if (config.output_dir) return fs::path(*config.output_dir);
  return std::nullopt;
}

scenario::RunOptions run_options(const Common& common) {
  scenario::RunOptions opts;
  opts.horizon = common.horizon;
  opts.seed = common.seed;
  return opts;
}

void print_summary(const scenario::ScenarioReport& r, std::ostream& os) {
  os << "scenario " << r.scenario_id << " (" << scenario::theorem_label(r.theorem)
     << "), horizon " << r.horizon << ", K = " << report::format_double(r.bounds.big_k) << "\n";
  for (const auto& c : r.checks)
    os << "  [" << (c.passed ? "ok" : "FAIL") << "] " << c.name << ": " << c.detail << "\n";
  if (r.rejection) os << "  rejected: " << *r.rejection << "\n";
  if (r.certification) {
    for (const auto& e : r.certification->entries) {
      os << "  eps " << report::format_double(e.eps) << ": phi "
         << (e.rate == kUnbounded ? std::string("inf") : std::to_string(e.rate)) << ", "
         << certify::to_string(e.verdict);
      if (!e.counterexamples.empty()) {
        const auto& x = e.counterexamples.front();
        os << " (n = " << x.n << ", residual " << report::format_double(x.residual) << ")";
      }
      os << "\n";
    }
  }
  os << (r.ok() ? "status: ok" : "status: failed") << "\n";
}

int cmd_list() {
  for (const auto& e : scenario::catalogue())
    std::cout << e.id << " → " << scenario::theorem_label(e.theorem) << "\n";
  return 0;
}

int cmd_show(const std::string& id) {
  const auto* e = scenario::find_bundled(id);
  if (!e) {
    std::cerr << "error: no bundled scenario '" << id << "'\n";
    return code(ExitCode::schema);
  }
  std::cout << e->config << "\n";
  return 0;
}

int cmd_run(const std::string& ref, const Common& common) {
  const auto config = resolve_config(ref);
  const auto report = scenario::run_scenario(config, run_options(common));
  print_summary(report, std::cout);
  if (const auto dir = output_dir(common, config)) {
    const auto a = report::write_artifacts(report, *dir, report::utc_timestamp());
    std::cout << "report: " << a.report.string() << "\n";
    if (!a.trace.empty()) std::cout << "trace: " << a.trace.string() << "\n";
  }
  return code(scenario::exit_code(report));
}

std::vector<double> parse_eps_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const double v = Expression(item, {}).evaluate({});
    if (!(v > 0.0)) throw scenario::SchemaError("eps values must be positive", "", std::nullopt);
    out.push_back(v);
  }
  if (out.empty()) throw scenario::SchemaError("empty eps list", "", std::nullopt);
  return out;
}

int cmd_rate_table(const std::string& ref, const std::string& eps, const Common& common) {
  const auto config = resolve_config(ref);
  auto opts = run_options(common);
  opts.eps_grid = parse_eps_list(eps);
  const auto report = scenario::run_scenario(config, opts);
  if (!report.certification) {
    std::cerr << "rejected: " << report.rejection.value_or("hypothesis check failed") << "\n";
    return code(ExitCode::failed);
  }
  std::cout << report::rate_table_csv(*report.certification);
  return code(scenario::exit_code(report));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certify convergence rates for iterative zero-finding schemes"};
  app.require_subcommand(1);
  Common common;
  app.add_option("--horizon", common.horizon, "Override the iteration horizon")
      ->check(CLI::PositiveNumber);
  app.add_option("--out", common.out, "Directory for report and trace (ACCRETIA_OUT wins)");
  app.add_option("--seed", common.seed, "Seed for sampling-based hypothesis checks");

  auto* list = app.add_subcommand("list-scenarios", "List bundled scenarios");
  list->fallthrough();

  std::string show_id;
  auto* show = app.add_subcommand("show-scenario", "Print the JSON config of a bundled scenario");
  show->add_option("id", show_id, "Bundled scenario id")->required();
  show->fallthrough();

  std::string run_ref;
  auto* run = app.add_subcommand("run", "Run a scenario and certify its rate");
  run->add_option("config", run_ref, "Config file or bundled scenario id")->required();
  run->fallthrough();

  std::string table_ref;
  std::string table_eps;
  auto* table = app.add_subcommand("rate-table", "Print Phi(eps) against the observed trace");
  table->add_option("config", table_ref, "Config file or bundled scenario id")->required();
  table->add_option("--eps", table_eps, "Comma-separated eps values, e.g. 0.1,2^-5")->required();
  table->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return code(ExitCode::schema);
  }

  try {
    if (*list) return cmd_list();
    if (*show) return cmd_show(show_id);
    if (*run) return cmd_run(run_ref, common);
    if (*table) return cmd_rate_table(table_ref, table_eps, common);
  } catch (const scenario::SchemaError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return code(ExitCode::schema);
  } catch (const ExpressionError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return code(ExitCode::schema);
  } catch (const schemes::SolverError& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return code(ExitCode::solver);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return code(ExitCode::solver);
  }
  return 0;
}

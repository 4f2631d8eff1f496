#include "accretia/report_io.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace accretia::report {

using ordered_json = nlohmann::ordered_json;

namespace {

ordered_json index_json(Index v) {
  if (v == kUnbounded) return "inf";
  return v;
}

template <class T>
ordered_json optional_json(const std::optional<T>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

ordered_json certification_json(const certify::CertificationReport& c) {
  ordered_json entries = ordered_json::array();
  for (const auto& e : c.entries) {
    ordered_json ce = ordered_json::array();
    for (const auto& x : e.counterexamples)
      ce.push_back({{"eps", x.eps}, {"n", x.n}, {"residual", x.residual}});
    entries.push_back({{"eps", e.eps},
                       {"phi", index_json(e.rate)},
                       {"status", certify::to_string(e.verdict)},
                       {"first_entry", optional_json(e.first_entry)},
                       {"slack_ratio", optional_json(e.slack_ratio)},
                       {"counterexamples", std::move(ce)}});
  }
  return {{"horizon", c.horizon},
          {"certified", c.count(certify::Verdict::certified)},
          {"vacuous", c.count(certify::Verdict::vacuous)},
          {"failed", c.count(certify::Verdict::failed)},
          {"entries", std::move(entries)}};
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string to_json(const scenario::ScenarioReport& r, std::string_view generated_at) {
  ordered_json j;
  j["scenario_id"] = r.scenario_id;
  j["theorem"] = scenario::to_string(r.theorem);
  j["horizon"] = r.horizon;
  j["seed"] = r.seed;
  j["status"] = r.ok() ? "ok" : "failed";
  j["bounds"] = {{"K", r.bounds.big_k},
                 {"K_prime", optional_json(r.bounds.k_prime)},
                 {"K0", optional_json(r.bounds.k0)},
                 {"K1", optional_json(r.bounds.k1)},
                 {"K2", optional_json(r.bounds.k2)}};
  j["rejection"] = optional_json(r.rejection);
  ordered_json checks = ordered_json::array();
  for (const auto& c : r.checks)
    checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  j["checks"] = std::move(checks);
  if (r.envelope) j["envelope"] = {{"n0", r.envelope->n0}, {"valid_from", r.envelope->valid_from()}};
  j["certification"] = r.certification ? certification_json(*r.certification) : nullptr;
  j["metadata"] = {{"generated_at", std::string(generated_at)}};
  return j.dump(2) + "\n";
}

std::string trace_csv(const schemes::IterationTrace& t) {
  std::string out = "n,residual,alpha_n,beta_n\n";
  for (std::size_t n = 0; n < t.residuals.size(); ++n) {
    out += std::to_string(n);
    out += ',';
    out += format_double(t.residuals[n]);
    out += ',';
    if (n < t.alphas.size()) out += format_double(t.alphas[n]);
    out += ',';
    if (n < t.betas.size()) out += format_double(t.betas[n]);
    out += '\n';
  }
  return out;
}

std::string rate_table_csv(const certify::CertificationReport& c) {
  std::string out = "eps,phi,first_entry,slack_ratio,status\n";
  for (const auto& e : c.entries) {
    out += format_double(e.eps);
    out += ',';
    out += e.rate == kUnbounded ? std::string("inf") : std::to_string(e.rate);
    out += ',';
    if (e.first_entry) out += std::to_string(*e.first_entry);
    out += ',';
    if (e.slack_ratio) out += format_double(*e.slack_ratio);
    out += ',';
    out += certify::to_string(e.verdict);
    out += '\n';
  }
  return out;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Artifacts write_artifacts(const scenario::ScenarioReport& r, const std::filesystem::path& dir,
                          std::string_view generated_at) {
  std::filesystem::create_directories(dir);
  Artifacts a;
  a.report = dir / (r.scenario_id + ".report.json");
  write_file(a.report, to_json(r, generated_at));
  if (r.trace) {
    a.trace = dir / (r.scenario_id + ".trace.csv");
    write_file(a.trace, trace_csv(*r.trace));
  }
  return a;
}

}  // namespace accretia::report

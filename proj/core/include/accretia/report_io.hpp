#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "accretia/certify.hpp"
#include "accretia/scenario.hpp"
#include "accretia/schemes.hpp"

namespace accretia::report {

/// Decimal form of a double with 17 significant digits
/// and '.' as the decimal point.
std::string format_double(double v);

/// Report as pretty-printed JSON with a fixed field order. The timestamp lands
/// only in metadata.generated_at.
std::string to_json(const scenario::ScenarioReport& report, std::string_view generated_at);

/// Trace as CSV with columns n, residual, alpha_n, beta_n (beta empty when absent).
std::string trace_csv(const schemes::IterationTrace& trace);

/// eps, phi, first_entry, slack_ratio, status. phi is "inf" when saturated,
/// empty cells mean "none".
std::string rate_table_csv(const certify::CertificationReport& report);

/// Current UTC time in ISO 8601.
std::string utc_timestamp();

struct Artifacts {
  std::filesystem::path report;
  std::filesystem::path trace;  ///< empty when the run produced no trace
};

/// Writes <dir>/<id>.report.json and <dir>/<id>.trace.csv.
Artifacts write_artifacts(const scenario::ScenarioReport& report,
                          const std::filesystem::path& dir, std::string_view generated_at);

}  // namespace accretia::report

#pragma once

// Command-line driver: runs verification checks and assembles a deterministic
// JSON report.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace frobsplit::cli {

using nlohmann::json;

inline constexpr const char* schema_version = "frobsplit-report/1";

struct RunConfig {
  std::string command;
  std::vector<std::int64_t> p{2, 3};
  std::vector<int> n{1, 2};
  int ext = 1;
  std::uint64_t seed = 0;
  int random = 3;  // random points per (p, n)
  int jobs = 1;
  std::optional<json> data;   // HypertoricData
  std::vector<json> points;   // PointTriple objects; c may be omitted for cover-fiber
  std::string closed_orbit = "1ps-checked";
  std::int64_t max_p = 7;
  int max_n = 3;
  int max_combinatorial_n = 12;
  std::string out;
};

/// Thrown for malformed flags or configs; maps to exit status 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Merges a JSON config file into `config`.  Keys: p, n, ext, seed, random,
/// jobs, data (or HypertoricData keys at top level), points, closed_orbit,
/// caps {max_p, max_n, max_combinatorial_n}.
void apply_config(RunConfig& config, const json& j);
/// Throws UsageError on out-of-range values.
void validate(const RunConfig& config);

/// Runs every check of config.command.  Keys are sorted; no timestamps.
json build_report(const RunConfig& config);
/// 0 when every check passed, else 1.
int exit_status(const json& report);
/// Human-readable summary of a report.
std::string summary_text(const json& report);

/// Parses argv and runs; returns the exit status (0 pass, 1 check failure,
/// 2 usage error).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace frobsplit::cli

#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "isoflow/report.hpp"

namespace isoflow {

inline constexpr const char* kToolVersion = "0.1.0";

/// Raised for malformed configuration files and out-of-range parameters.
class ConfigError : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

struct ScenarioParams {
  Index m = 1;
  Index T = 2;
  Index r = 1;
  Index d = 1;
  Index q = 3;
  Index K = 8;
  Index max_orbit = 16;
  /// Sample times as step counts on the grid (1/m)Z_+; empty means the
  /// construction's default.
  std::vector<Index> samples;
  /// Variant selector for constructions that cover several setups.
  std::string setup;
};

struct Scenario {
  std::string name;
  std::string construction;
  ScenarioParams params;
  Tolerances tol;
  /// Keys in the order they appeared, for the parameter echo.
  std::vector<std::pair<std::string, std::string>> raw;
};

struct CatalogEntry {
  std::string name;
  std::string anchor;
  std::string parameters;
  std::string summary;
};

const std::vector<CatalogEntry>& catalog();
std::string list_catalog();

/// Parses `[name]` sections of `key = value` lines. '#' starts a comment.
/// Throws ConfigError with the offending line number.
std::vector<Scenario> parse_scenarios(std::istream& in);
std::vector<Scenario> load_scenarios(const std::string& path);

/// Throws ConfigError if the construction is unknown or a parameter is out of
/// its documented range.
void validate_scenario(const Scenario& s);

struct ScenarioReport {
  std::string name;
  std::string construction;
  std::string param_echo;
  double resid_abs = 0.0;
  Report report;

  bool pass() const { return report.pass(); }
};

/// Runs the checks for one scenario. Numerical preconditions that fail at
/// run time (window exhaustion and the like) become failing entries.
ScenarioReport run_scenario(const Scenario& s);

/// Deterministic text form of a batch of reports.
std::string format_reports(const std::vector<ScenarioReport>& reports);

}  // namespace isoflow

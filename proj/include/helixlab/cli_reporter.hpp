#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "helixlab/normal_sections.hpp"

namespace helixlab {

inline constexpr const char* kSuiteNames[] = {"frenet", "wcurve", "extrinsic", "normal_sections", "prop31",
                                              "prop32", "prop33", "prop34", "lemma31", "thm33"};

/// One batch run. JSON keys: geometry, suites, samples, seed, tolerances, and
/// optionally directions, span, curves, surface_curves.
struct Scenario {
  std::string geometry;
  std::vector<std::string> suites;
  int samples = 8;
  std::uint64_t seed = 1;
  /// unit tangents per point for the isotropy and third-form sweeps
  int directions = 16;
  double span = 1.0;
  /// catalog curves for the frenet and wcurve suites
  std::vector<std::string> curves;
  /// parameter curves for prop33 and prop34
  std::vector<std::string> surface_curves;
  Tolerances tolerances;
  /// the parsed document, echoed into the report
  std::string config_echo;
};

/// Throws ConfigError on schema violations, unknown suites, unknown
/// tolerance keys and unknown geometry or curve names.
Scenario parse_scenario(const std::string& json_text);
Scenario load_scenario(const std::string& path);

struct Report {
  std::string version;
  std::string config_echo;
  std::vector<CheckRecord> records;
  std::vector<std::string> notes;

  int failed() const;
  int expected_violations() const;
  bool passed() const { return failed() == 0; }
};

struct RunOptions {
  int jobs = 1;
  double tol_scale = 1.0;
};

/// Runs every selected suite. Engine errors become failed records; the order
/// of records depends only on the scenario.
Report run_scenario(const Scenario& scenario, const RunOptions& options = {});

std::string report_json(const Report& report);
/// Columns: check_id, geometry, point, direction, residual, tolerance, pass.
std::string report_csv(const Report& report);

/// One line per entry with its known facts.
std::string catalog_listing();

/// Sampled points of one normal section: s, u_1..u_n, x_1..x_m.
std::string trace_csv(const std::string& geometry, const Vector& u, const Vector& X, double span);

}  // namespace helixlab

// helixlab command-line runner.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "helixlab/cli_reporter.hpp"
#include "helixlab/errors.hpp"

namespace {

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw helixlab::ConfigError("cannot write '" + path + "'");
  out << text;
}

helixlab::Vector to_vector(const std::vector<double>& xs) {
  return Eigen::Map<const helixlab::Vector>(xs.data(), static_cast<Eigen::Index>(xs.size()));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical checks for curves and submanifolds of pseudo-Euclidean spaces"};
  app.set_version_flag("--version", HELIXLAB_VERSION);
  app.require_subcommand(1);

  std::string config, report_path, csv_path;
  int jobs = 1;
  double tol_scale = 1.0;
  auto* check = app.add_subcommand("check", "Run the suites of a scenario file");
  check->add_option("config", config, "Scenario JSON")->required();
  check->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
  check->add_option("--report", report_path, "Write the JSON report here");
  check->add_option("--csv", csv_path, "Write the residual table here");
  check->add_option("--tol-scale", tol_scale, "Multiply every tolerance")->check(CLI::PositiveNumber);

  auto* catalog = app.add_subcommand("catalog", "Catalog queries");
  catalog->require_subcommand(1);
  auto* list = catalog->add_subcommand("list", "List geometries with their known facts");

  std::string geometry, out_path;
  std::vector<double> point, direction;
  double span = 1.0;
  auto* trace = app.add_subcommand("trace", "Sample one normal section");
  trace->add_option("geometry", geometry, "Catalog name")->required();
  trace->add_option("--point", point, "Parameter point")->required()->delimiter(',');
  trace->add_option("--direction", direction, "Tangent direction in coordinates")->required()->delimiter(',');
  trace->add_option("--span", span, "Arclength span")->check(CLI::PositiveNumber);
  trace->add_option("--out", out_path, "CSV output (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (check->parsed()) {
      const helixlab::Scenario sc = helixlab::load_scenario(config);
      const helixlab::Report rep = helixlab::run_scenario(sc, {jobs, tol_scale});
      if (!report_path.empty()) write_file(report_path, helixlab::report_json(rep));
      if (!csv_path.empty()) write_file(csv_path, helixlab::report_csv(rep));
      const int total = static_cast<int>(rep.records.size());
      std::cout << total << " checks, " << total - rep.failed() << " passed, " << rep.failed() << " failed ("
                << rep.expected_violations() << " negative controls)\n";
      for (const auto& r : rep.records)
        if (!r.pass) std::cout << "FAIL " << r.check_id << " " << r.geometry << " residual " << r.residual
                               << " tolerance " << r.tolerance << (r.note.empty() ? "" : " (" + r.note + ")") << "\n";
      return rep.passed() ? 0 : 1;
    }
    if (list->parsed()) {
      std::cout << helixlab::catalog_listing();
      return 0;
    }
    if (trace->parsed()) {
      const std::string csv = helixlab::trace_csv(geometry, to_vector(point), to_vector(direction), span);
      if (out_path.empty()) std::cout << csv;
      else write_file(out_path, csv);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

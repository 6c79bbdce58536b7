#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "helixlab/catalog.hpp"
#include "helixlab/cli_reporter.hpp"
#include "helixlab/curve_engine.hpp"
#include "helixlab/errors.hpp"
#include "helixlab/normal_sections.hpp"

namespace py = pybind11;
using namespace helixlab;

namespace {

const CatalogCurve& find_curve(const std::vector<CatalogCurve>& curves, const std::string& name) {
  for (const auto& c : curves)
    if (c.name == name) return c;
  throw ConfigError("unknown curve '" + name + "'");
}

py::dict facts_dict(const CatalogEntry& e) {
  py::dict d;
  d["name"] = e.name;
  d["description"] = e.description;
  d["origin"] = e.facts.origin;
  d["dimension"] = e.chart.parameter_dimension();
  d["totally_umbilical"] = e.facts.totally_umbilical;
  d["parallel_mean_curvature"] = e.facts.parallel_mean_curvature;
  d["geodesic_sections"] = e.facts.geodesic_sections;
  d["mean_curvature_squared"] = e.facts.mean_curvature_squared ? py::cast(*e.facts.mean_curvature_squared) : py::none();
  d["isotropy"] = e.facts.isotropy ? py::cast(*e.facts.isotropy) : py::none();
  d["planarity_order"] = e.facts.planarity_order ? py::cast(*e.facts.planarity_order) : py::none();
  return d;
}

}  // namespace

PYBIND11_MODULE(_helixlab, m) {
  m.attr("__version__") = HELIXLAB_VERSION;

  auto base = py::register_exception<GeometryError>(m, "GeometryError", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", base);
  py::register_exception<NotGeodesicSection>(m, "NotGeodesicSection", base);
  py::register_exception<NullSection>(m, "NullSection", base);
  py::register_exception<DimensionError>(m, "DimensionError", base);

  m.def("catalog_names", &catalog_names);
  m.def("catalog_listing", &catalog_listing);
  m.def("describe", [](const std::string& name) { return facts_dict(catalog_entry(name)); });
  m.def("curve_names", [] {
    std::vector<std::string> out;
    for (const auto& c : catalog_curves()) out.push_back(c.name);
    return out;
  });

  m.def(
      "run_check",
      [](const std::string& config_json, int jobs, double tol_scale) {
        const Scenario sc = parse_scenario(config_json);
        Report rep;
        {
          py::gil_scoped_release release;
          rep = run_scenario(sc, {jobs, tol_scale});
        }
        return py::make_tuple(report_json(rep), report_csv(rep));
      },
      py::arg("config_json"), py::arg("jobs") = 1, py::arg("tol_scale") = 1.0,
      "Runs a scenario given as JSON text; returns (json_report, csv_table).");

  m.def(
      "trace_section",
      [](const std::string& geometry, const Vector& u, const Vector& X, double span) {
        const CatalogEntry e = catalog_entry(geometry);
        SectionOptions o;
        o.span = span;
        const NormalSection sec = trace_normal_section(e.chart, u, X, o);
        const auto n = static_cast<Eigen::Index>(sec.trace.size());
        Vector s(n);
        Matrix pts(n, sec.base_point.size());
        for (Eigen::Index i = 0; i < n; ++i) {
          s(i) = sec.trace[i].s;
          pts.row(i) = sec.trace[i].point.transpose();
        }
        py::dict d;
        d["s"] = s;
        d["points"] = pts;
        d["sign"] = sec.sign;
        d["geodesic"] = sec.geodesic;
        d["planarity_order"] = sec.planarity_order;
        d["rank_ratios"] = sec.rank_ratios;
        d["max_tangential_acceleration"] = sec.max_tangential_acceleration;
        d["reached_boundary"] = sec.reached_boundary;
        return d;
      },
      py::arg("geometry"), py::arg("point"), py::arg("direction"), py::arg("span") = 1.0);

  m.def(
      "classify_curve",
      [](const std::string& name, int samples) {
        const auto curves = catalog_curves();
        const CatalogCurve& c = find_curve(curves, name);
        const WCurveVerdict v = classify_w_curve(c.curve, c.signature, samples, c.sampling);
        py::dict d;
        d["is_w_curve"] = v.is_w_curve;
        d["rank"] = v.rank;
        d["curvatures"] = v.curvature_means;
        d["identity_residual"] = v.identity_residual;
        d["frenet_residual"] = v.frenet_residual;
        return d;
      },
      py::arg("name"), py::arg("samples") = 20);
}

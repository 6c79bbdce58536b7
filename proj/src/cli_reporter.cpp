#include "helixlab/cli_reporter.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "helixlab/errors.hpp"

namespace helixlab {

namespace {

using json = nlohmann::ordered_json;
constexpr double kInf = std::numeric_limits<double>::infinity();

std::map<std::string, CatalogCurve> curve_table() {
  std::map<std::string, CatalogCurve> out;
  for (auto& c : catalog_curves()) out.emplace(c.name, c);
  return out;
}

std::map<std::string, SurfaceCurve> surface_curve_table() {
  std::map<std::string, SurfaceCurve> out;
  for (auto c : {latitude_circle(), great_circle(), latitude_spiral()}) out.emplace(c.name, c);
  return out;
}

std::vector<std::string> string_list(const json& doc, const char* key) {
  std::vector<std::string> out;
  if (!doc.contains(key)) return out;
  const json& v = doc[key];
  if (!v.is_array()) throw ConfigError(std::string(key) + " must be an array of strings");
  for (const auto& x : v) {
    if (!x.is_string()) throw ConfigError(std::string(key) + " must be an array of strings");
    out.push_back(x.get<std::string>());
  }
  return out;
}

int positive_int(const json& doc, const char* key, int fallback) {
  if (!doc.contains(key)) return fallback;
  const json& v = doc[key];
  if (!v.is_number_integer() || v.get<long long>() < 1 || v.get<long long>() > 100000)
    throw ConfigError(std::string(key) + " must be a positive integer");
  return v.get<int>();
}

bool is_unit_sphere(const std::string& geometry) { return geometry == "pseudo_sphere:n=2,r=0,c=1"; }

std::string fmt_num(double x, const char* spec) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, x);
  return buf;
}

std::string fmt_vec(const Vector& v) {
  std::string s;
  for (Eigen::Index i = 0; i < v.size(); ++i) s += (i ? ";" : "") + fmt_num(v[i], "%.10g");
  return s;
}

Vector scalar(double x) { return Vector::Constant(1, x); }

// A unit of work yielding records; failures become one failed record.
struct Task {
  std::string suite;
  std::string geometry;
  Vector point;
  Vector direction;
  std::function<PropositionReport()> run;
};

struct TaskResult {
  std::vector<CheckRecord> records;
  std::vector<std::string> notes;
};

TaskResult execute(const Task& t) {
  TaskResult r;
  auto error_record = [&](const std::string& kind, const std::string& what) {
    r.records.push_back(make_record(t.suite + ".error", t.geometry, t.point, t.direction, kInf, 0.0, false,
                                    kind + ": " + what));
  };
  try {
    const PropositionReport rep = t.run();
    r.records = rep.records;
    for (const auto& n : rep.notes) r.notes.push_back(rep.geometry + " " + rep.id + ": " + n);
  } catch (const GeometryError& e) {
    error_record(e.kind(), e.what());
  } catch (const std::exception& e) {
    error_record("RuntimeError", e.what());
  }
  return r;
}

PropositionReport single(std::string id, std::string geometry, std::vector<CheckRecord> recs) {
  PropositionReport p;
  p.id = std::move(id);
  p.geometry = std::move(geometry);
  p.records = std::move(recs);
  return p;
}

void add_curve_tasks(std::vector<Task>& tasks, const Scenario& sc, const Tolerances& tol, bool wcurve) {
  const auto table = curve_table();
  const std::vector<std::string> names = [&] {
    if (!sc.curves.empty()) return sc.curves;
    std::vector<std::string> all;
    for (const auto& c : catalog_curves()) all.push_back(c.name);
    return all;
  }();
  for (const auto& name : names) {
    const CatalogCurve c = table.at(name);
    if (!wcurve) {
      for (int i = 0; i < sc.samples; ++i) {
        const double t = c.sampling.lo + c.sampling.width() * (i + 0.5) / sc.samples;
        tasks.push_back({"frenet", name, scalar(t), Vector(), [c, t, tol] {
                           const FrenetApparatus a = frenet_apparatus(c.curve, t, c.signature);
                           double worst = 0.0;
                           for (double r : frenet_residuals(a)) worst = std::max(worst, r);
                           return single("frenet", c.name,
                                         {make_record("frenet.recursion", c.name, scalar(t), Vector(), worst,
                                                      tol.frenet, false, "order " + std::to_string(a.order))});
                         }});
      }
      continue;
    }
    const int samples = std::max(sc.samples, 2);
    tasks.push_back({"wcurve", name, Vector(), Vector(), [c, tol, samples] {
                       FrenetOptions fo;
                       fo.tol_curvature = tol.frenet;
                       const WCurveVerdict v =
                           classify_w_curve(c.curve, c.signature, samples, c.sampling, tol.curvature_constancy, fo);
                       std::vector<CheckRecord> recs;
                       const Vector at = scalar(c.sampling.lo);
                       const bool agrees = v.is_w_curve == c.w_curve && v.rank == c.rank;
                       recs.push_back(make_record("wcurve.classification", c.name, at, Vector(), agrees ? 0.0 : 1.0,
                                                  0.5, false,
                                                  "rank " + std::to_string(v.rank) +
                                                      (v.is_w_curve ? ", W-curve" : ", not a W-curve")));
                       if (v.rank == 2) {
                         recs.push_back(make_record("wcurve.plane_identity", c.name, at, Vector(),
                                                    v.identity_residual, tol.plane_identity, !c.w_curve));
                       } else if (v.rank == 3) {
                         recs.push_back(make_record("wcurve.helix_identity", c.name, at, Vector(),
                                                    v.identity_residual, tol.helix_identity, !c.w_curve));
                       }
                       double dev = 0.0;
                       for (std::size_t i = 0; i < c.curvatures.size() && i < v.curvature_means.size(); ++i)
                         dev = std::max(dev, std::abs(v.curvature_means[i] - c.curvatures[i]));
                       if (!c.curvatures.empty()) {
                         recs.push_back(make_record("wcurve.curvatures", c.name, at, Vector(), dev, tol.frenet));
                       }
                       return single("wcurve", c.name, std::move(recs));
                     }});
  }
}

PropositionReport extrinsic_point(const CatalogEntry& e, const TangentSample& s, const Tolerances& tol, double span) {
  const int n = e.chart.parameter_dimension();
  const StructuralResiduals sr = structural_residuals(e.chart, s.u);
  const ExtrinsicState st = extrinsic_state(e.chart, s.u);
  const MetricSignature& sig = e.chart.ambient();
  std::vector<CheckRecord> recs;
  const std::string& g = e.name;
  recs.push_back(make_record("extrinsic.duality", g, s.u, s.direction, sr.duality, tol.duality));
  recs.push_back(make_record("extrinsic.normality", g, s.u, s.direction, sr.normality, tol.normality));
  recs.push_back(make_record("extrinsic.codazzi", g, s.u, s.direction, sr.codazzi, tol.codazzi));
  recs.push_back(make_record("extrinsic.umbilicity", g, s.u, s.direction, sr.umbilicity, tol.umbilicity,
                             !e.facts.totally_umbilical,
                             e.facts.totally_umbilical ? "umbilical expected" : "non-umbilical control"));
  if (e.facts.mean_curvature_squared) {
    recs.push_back(make_record("extrinsic.mean_curvature_squared", g, s.u, s.direction,
                               std::abs(sig.norm_squared(st.mean_curvature) - *e.facts.mean_curvature_squared),
                               tol.umbilicity));
  }
  if (e.facts.parallel_mean_curvature) {
    const std::vector<Vector> pts{s.u};
    std::vector<Vector> dirs;
    for (int i = 0; i < n; ++i) dirs.push_back(Vector::Unit(n, i));
    const PointCheck pc = is_parallel_mean_curvature(e.chart, pts, dirs, tol.parallel_mean_curvature);
    recs.push_back(make_record("extrinsic.parallel_mean_curvature", g, s.u, s.direction, pc.residual,
                               tol.parallel_mean_curvature));
  }
  const double length = std::min(span, 0.5);
  const GeodesicPath path = integrate_geodesic(e.chart, s.u, s.direction, length);
  recs.push_back(make_record("extrinsic.geodesic_speed_drift", g, s.u, s.direction, path.max_speed_drift / length,
                             tol.speed_drift));
  return single("extrinsic", g, std::move(recs));
}

std::vector<Task> build_tasks(const Scenario& sc, const Tolerances& tol) {
  std::vector<Task> tasks;
  const CatalogEntry entry = catalog_entry(sc.geometry);
  SectionOptions opt;
  opt.span = sc.span;
  opt.tol = tol;

  bool need_samples = false;
  for (const auto& s : sc.suites) need_samples = need_samples || (s != "frenet" && s != "wcurve");
  const std::vector<TangentSample> samples = need_samples ? tangent_samples(entry, sc.samples, sc.seed)
                                                          : std::vector<TangentSample>{};
  const std::vector<Vector> points = need_samples ? sample_points(entry, sc.samples, sc.seed) : std::vector<Vector>{};
  const std::vector<TangentSample> section_checks(samples.begin(),
                                                  samples.begin() + std::min<std::ptrdiff_t>(2, samples.size()));
  const auto surfaces = surface_curve_table();
  std::vector<std::string> surface_names = sc.surface_curves;

  for (const std::string& suite : sc.suites) {
    if (suite == "frenet" || suite == "wcurve") {
      add_curve_tasks(tasks, sc, tol, suite == "wcurve");
      continue;
    }
    auto per_sample = [&](auto fn) {
      for (const TangentSample& s : samples) {
        tasks.push_back({suite, entry.name, s.u, s.direction, [entry, s, opt, fn] { return fn(entry, s, opt); }});
      }
    };
    if (suite == "extrinsic") {
      per_sample([](const CatalogEntry& e, const TangentSample& s, const SectionOptions& o) {
        return extrinsic_point(e, s, o.tol, o.span);
      });
    } else if (suite == "normal_sections") {
      per_sample([](const CatalogEntry& e, const TangentSample& s, const SectionOptions& o) {
        return check_normal_sections(e, {s}, o);
      });
    } else if (suite == "prop31") {
      per_sample([](const CatalogEntry& e, const TangentSample& s, const SectionOptions& o) {
        return verify_prop31(e, s.u, s.direction, o);
      });
    } else if (suite == "prop32") {
      per_sample([](const CatalogEntry& e, const TangentSample& s, const SectionOptions& o) {
        return verify_prop32(e, {s}, o);
      });
    } else if (suite == "prop33" || suite == "prop34") {
      const bool p34 = suite == "prop34";
      if (!p34) {
        per_sample([](const CatalogEntry& e, const TangentSample& s, const SectionOptions& o) {
          return verify_prop33(e, s.u, s.direction, o);
        });
      }
      std::vector<std::string> names = surface_names;
      if (names.empty() && is_unit_sphere(entry.name)) {
        names = p34 ? std::vector<std::string>{"latitude_circle", "great_circle"}
                    : std::vector<std::string>{"latitude_circle", "latitude_spiral"};
      }
      const int count = std::max(sc.samples, 3);
      for (const auto& name : names) {
        const SurfaceCurve c = surfaces.at(name);
        tasks.push_back({suite, entry.name, Vector(), Vector(), [entry, c, tol, count, p34] {
                           const Interval span{-1.0, 1.0};
                           PropositionReport r = p34 ? verify_prop34(entry, c.parameter_curve, span, count, tol)
                                                     : verify_prop33_curve(entry, c.parameter_curve, span, count, tol);
                           for (auto& rec : r.records) rec.note = c.name + (rec.note.empty() ? "" : "; " + rec.note);
                           for (auto& n : r.notes) n = c.name + ": " + n;
                           return r;
                         }});
      }
    } else if (suite == "lemma31" || suite == "thm33") {
      const bool lemma = suite == "lemma31";
      const int directions = sc.directions;
      const Vector u0 = points.empty() ? Vector() : points.front();
      tasks.push_back({suite, entry.name, u0, Vector(), [entry, points, section_checks, opt, directions, lemma] {
                         return lemma ? verify_lemma31(entry, points, directions, section_checks, opt)
                                      : verify_thm33(entry, points, directions, section_checks, opt);
                       }});
    }
  }
  return tasks;
}

json vector_json(const Vector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

json number_json(double x) { return std::isfinite(x) ? json(x) : json(fmt_num(x, "%g")); }

}  // namespace

Scenario parse_scenario(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  static const char* const known[] = {"geometry", "suites", "samples", "seed", "tolerances",
                                      "directions", "span", "curves", "surface_curves"};
  for (const auto& [key, _] : doc.items()) {
    if (std::find_if(std::begin(known), std::end(known), [&](const char* k) { return key == k; }) == std::end(known))
      throw ConfigError("unknown config key '" + key + "'");
  }
  Scenario sc;
  if (!doc.contains("geometry") || !doc["geometry"].is_string()) throw ConfigError("geometry must be a string");
  sc.geometry = doc["geometry"].get<std::string>();
  catalog_entry(sc.geometry);  // validates
  if (!doc.contains("suites")) throw ConfigError("suites is required");
  sc.suites = string_list(doc, "suites");
  for (const auto& s : sc.suites) {
    if (std::find(std::begin(kSuiteNames), std::end(kSuiteNames), s) == std::end(kSuiteNames))
      throw ConfigError("unknown suite '" + s + "'");
  }
  sc.samples = positive_int(doc, "samples", sc.samples);
  sc.directions = positive_int(doc, "directions", sc.directions);
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned()) throw ConfigError("seed must be a non-negative integer");
    sc.seed = doc["seed"].get<std::uint64_t>();
  }
  if (doc.contains("span")) {
    if (!doc["span"].is_number() || !(doc["span"].get<double>() > 0.0)) throw ConfigError("span must be positive");
    sc.span = doc["span"].get<double>();
  }
  const auto curves = curve_table();
  sc.curves = string_list(doc, "curves");
  for (const auto& c : sc.curves)
    if (!curves.count(c)) throw ConfigError("unknown curve '" + c + "'");
  const auto surfaces = surface_curve_table();
  sc.surface_curves = string_list(doc, "surface_curves");
  for (const auto& c : sc.surface_curves)
    if (!surfaces.count(c)) throw ConfigError("unknown surface curve '" + c + "'");
  if (doc.contains("tolerances")) {
    const json& t = doc["tolerances"];
    if (!t.is_object()) throw ConfigError("tolerances must be an object");
    for (const auto& [key, value] : t.items()) {
      double* slot = sc.tolerances.find(key);
      if (!slot) throw ConfigError("unknown tolerance '" + key + "'");
      if (!value.is_number() || !(value.get<double>() > 0.0))
        throw ConfigError("tolerance '" + key + "' must be a positive number");
      *slot = value.get<double>();
    }
  }
  sc.config_echo = doc.dump();
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

int Report::failed() const {
  return static_cast<int>(std::count_if(records.begin(), records.end(), [](const CheckRecord& r) { return !r.pass; }));
}

int Report::expected_violations() const {
  return static_cast<int>(
      std::count_if(records.begin(), records.end(), [](const CheckRecord& r) { return r.expect_violation; }));
}

Report run_scenario(const Scenario& sc, const RunOptions& opt) {
  if (!(opt.tol_scale > 0.0)) throw ConfigError("tolerance scale must be positive");
  const Tolerances tol = sc.tolerances.scaled(opt.tol_scale);
  const std::vector<Task> tasks = build_tasks(sc, tol);
  std::vector<TaskResult> results(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) results[i] = execute(tasks[i]);
  };
  const int jobs = std::clamp(opt.jobs, 1, 256);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  Report rep;
  rep.version = HELIXLAB_VERSION;
  rep.config_echo = sc.config_echo;
  for (auto& r : results) {
    rep.records.insert(rep.records.end(), r.records.begin(), r.records.end());
    rep.notes.insert(rep.notes.end(), r.notes.begin(), r.notes.end());
  }
  return rep;
}

std::string report_json(const Report& report) {
  json doc;
  doc["tool"] = "helixlab";
  doc["version"] = report.version;
  doc["config"] = report.config_echo.empty() ? json::object() : json::parse(report.config_echo);
  const int total = static_cast<int>(report.records.size());
  doc["summary"] = {{"checks", total},
                    {"passed", total - report.failed()},
                    {"failed", report.failed()},
                    {"expected_violations", report.expected_violations()}};
  json recs = json::array();
  for (const auto& r : report.records) {
    recs.push_back({{"check_id", r.check_id},
                    {"geometry", r.geometry},
                    {"point", vector_json(r.point)},
                    {"direction", vector_json(r.direction)},
                    {"residual", number_json(r.residual)},
                    {"tolerance", number_json(r.tolerance)},
                    {"expect_violation", r.expect_violation},
                    {"pass", r.pass},
                    {"note", r.note}});
  }
  doc["records"] = std::move(recs);
  doc["notes"] = report.notes;
  return doc.dump(2) + "\n";
}

std::string report_csv(const Report& report) {
  std::string out = "check_id,geometry,point,direction,residual,tolerance,pass\n";
  auto quote = [](const std::string& s) {
    if (s.find_first_of(",\"") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    return q + "\"";
  };
  for (const auto& r : report.records) {
    out += quote(r.check_id) + "," + quote(r.geometry) + "," + fmt_vec(r.point) + "," + fmt_vec(r.direction) + "," +
           fmt_num(r.residual, "%.6e") + "," + fmt_num(r.tolerance, "%.3e") + "," + (r.pass ? "true" : "false") +
           "\n";
  }
  return out;
}

std::string catalog_listing() {
  std::string out;
  for (const auto& name : catalog_names()) {
    const CatalogEntry e = catalog_entry(name);
    const KnownFacts& f = e.facts;
    std::string facts;
    auto add = [&](const std::string& s) { facts += (facts.empty() ? "" : " ") + s; };
    if (f.mean_curvature_squared) add("<H,H>=" + fmt_num(*f.mean_curvature_squared, "%g"));
    if (f.isotropy) add("L=" + fmt_num(*f.isotropy, "%g"));
    if (f.planarity_order) add("planar=" + std::to_string(*f.planarity_order));
    if (f.totally_umbilical) add("umbilical");
    if (f.parallel_mean_curvature) add("parallel-H");
    if (f.one_parallel) add("1-parallel");
    if (f.geodesic_sections) add("geodesic-sections");
    out += e.name + "\t" + e.description + "\torigin: " + f.origin + "\t" + (facts.empty() ? "-" : facts) + "\n";
  }
  return out;
}

std::string trace_csv(const std::string& geometry, const Vector& u, const Vector& X, double span) {
  const CatalogEntry e = catalog_entry(geometry);
  const int n = e.chart.parameter_dimension();
  if (u.size() != n || X.size() != n) throw ConfigError("point and direction need " + std::to_string(n) + " entries");
  const ExtrinsicState st = extrinsic_state(e.chart, u);
  const double q = X.dot(st.metric * X);
  if (std::abs(q) < kDefaultTolNull) throw ConfigError("direction is null");
  SectionOptions opt;
  opt.span = span;
  const NormalSection sec = trace_normal_section(e.chart, u, X / std::sqrt(std::abs(q)), opt);
  std::string out = "s";
  for (int i = 1; i <= n; ++i) out += ",u" + std::to_string(i);
  for (int i = 1; i <= e.chart.ambient().dimension(); ++i) out += ",x" + std::to_string(i);
  out += "\n";
  for (const auto& p : sec.trace) {
    out += fmt_num(p.s, "%.10g");
    for (Eigen::Index i = 0; i < p.u.size(); ++i) out += "," + fmt_num(p.u[i], "%.12g");
    for (Eigen::Index i = 0; i < p.point.size(); ++i) out += "," + fmt_num(p.point[i], "%.12g");
    out += "\n";
  }
  return out;
}

}  // namespace helixlab

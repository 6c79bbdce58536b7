// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "helixlab/catalog.hpp"
#include "helixlab/cli_reporter.hpp"
#include "helixlab/curve_engine.hpp"
#include "helixlab/errors.hpp"
#include "helixlab/normal_sections.hpp"
#include "helixlab/submanifold_engine.hpp"

using namespace helixlab;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", x);
  return buf;
}

std::vector<CatalogEntry> quadrics() {
  return {pseudo_sphere(2, 0, 1.0), pseudo_sphere(2, 1, 1.0), pseudo_hyperbolic(2, 0, -1.0)};
}

double max_record(const PropositionReport& r, const std::string& id) {
  double m = 0.0;
  for (const auto& rec : r.records)
    if (rec.check_id == id) m = std::max(m, rec.residual);
  return m;
}

Outcome frenet_recursion() {
  double worst = 0.0;
  int evaluated = 0;
  for (const CatalogCurve& c : catalog_curves()) {
    for (int i = 0; i < 50; ++i) {
      const double t = c.sampling.lo + c.sampling.width() * i / 49.0;
      for (double r : frenet_residuals(frenet_apparatus(c.curve, t, c.signature))) worst = std::max(worst, r);
      ++evaluated;
    }
  }
  return {worst < 1e-6 && evaluated == 300, "max frame residual " + sci(worst) + " over " + std::to_string(evaluated) +
                                                " samples (< 1e-6)"};
}

Outcome plane_w_curves() {
  double worst = 0.0;
  bool ok = true;
  for (const CatalogCurve& c : {circle_curve(), hyperbola_curve()}) {
    const WCurveVerdict v = classify_w_curve(c.curve, c.signature, 20, c.sampling);
    ok = ok && v.rank == 2 && v.is_w_curve;
    worst = std::max(worst, v.identity_residual);
  }
  const CatalogCurve h = hyperbola_curve();
  const FrenetApparatus a = frenet_apparatus(h.curve, 0.3, h.signature);
  const bool spacelike_normal_flipped = a.signs.size() == 2 && a.signs[1] == -1;
  return {ok && spacelike_normal_flipped && worst < 1e-8,
          "rank 2 on circle and hyperbola, hyperbola e2 = " + std::to_string(a.signs.at(1)) +
              ", max third-derivative residual " + sci(worst) + " (< 1e-8)"};
}

Outcome helices() {
  double worst = 0.0;
  bool ok = true;
  for (const CatalogCurve& c : {helix_curve(), lorentz_helix_curve()}) {
    const WCurveVerdict v = classify_w_curve(c.curve, c.signature, 20, c.sampling);
    ok = ok && v.rank == 3 && v.is_w_curve;
    worst = std::max(worst, v.identity_residual);
  }
  return {ok && worst < 1e-6, "rank 3 on both helices, max fourth-derivative residual " + sci(worst) + " (< 1e-6)"};
}

Outcome quadric_sections() {
  bool ok = true;
  double worst_acc = 0.0, worst_ratio = 0.0, min_margin = 1.0;
  int spacelike = 0, timelike = 0, total = 0;
  for (const CatalogEntry& e : quadrics()) {
    for (const TangentSample& s : tangent_samples(e, 20, 2024)) {
      const NormalSection sec = trace_normal_section(e.chart, s.u, s.direction);
      ok = ok && sec.geodesic && sec.planarity_order == 2;
      worst_acc = std::max(worst_acc, sec.max_tangential_acceleration);
      worst_ratio = std::max(worst_ratio, sec.rank_ratios[2]);
      min_margin = std::min(min_margin, sec.rank_ratios[1]);
      if (e.chart.index() == 1) (s.sign > 0 ? spacelike : timelike)++;
      ++total;
    }
  }
  ok = ok && spacelike > 0 && timelike > 0 && worst_acc < 1e-6 && worst_ratio < 1e-8;
  return {ok, std::to_string(total) + " sections: max tangential acceleration " + sci(worst_acc) +
                  ", max third singular ratio " + sci(worst_ratio) + ", min second " + sci(min_margin) +
                  ", de Sitter spacelike/timelike " + std::to_string(spacelike) + "/" + std::to_string(timelike)};
}

Outcome section_derivatives() {
  double r2 = 0.0, r3 = 0.0, r4 = 0.0;
  for (const CatalogEntry& e : quadrics()) {
    for (const TangentSample& s : tangent_samples(e, 10, 77)) {
      const PropositionReport r = verify_prop31(e, s.u, s.direction);
      r2 = std::max(r2, max_record(r, "prop31.second_derivative"));
      r3 = std::max(r3, max_record(r, "prop31.third_derivative"));
      r4 = std::max(r4, max_record(r, "prop31.fourth_derivative"));
    }
  }
  return {r2 < 1e-7 && r3 < 1e-5 && r4 < 1e-4,
          "max residuals " + sci(r2) + " / " + sci(r3) + " / " + sci(r4) + " (< 1e-7 / 1e-5 / 1e-4)"};
}

Outcome section_frenet() {
  double shape = 0.0, decomposition = 0.0;
  bool hyp = true;
  std::vector<CatalogEntry> entries = quadrics();
  entries.push_back(veronese());
  for (const CatalogEntry& e : entries) {
    const PropositionReport r = verify_prop32(e, tangent_samples(e, 8, 31));
    hyp = hyp && r.hypothesis_met;
    shape = std::max({shape, max_record(r, "prop32.shape_operator"), max_record(r, "prop32.principal_normal"),
                      max_record(r, "prop32.tangential_third_derivative")});
    decomposition = std::max({decomposition, max_record(r, "prop32.normal_decomposition"),
                              max_record(r, "prop32.full_decomposition")});
  }
  return {hyp && shape < 1e-6 && decomposition < 1e-5,
          "shape-operator residual " + sci(shape) + " (< 1e-6), decomposition residual " + sci(decomposition) +
              " (< 1e-5)"};
}

Outcome intrinsic_rank_two() {
  const CatalogEntry s = pseudo_sphere(2, 0, 1.0);
  const PropositionReport lat = verify_prop33_curve(s, latitude_circle().parameter_curve, {-1.0, 1.0}, 12);
  const PropositionReport sp = verify_prop33_curve(s, latitude_spiral().parameter_curve, {-1.0, 1.0}, 12);
  bool lat_w2 = lat.passed(), sp_w2 = false;
  for (const auto& r : lat.records) lat_w2 = lat_w2 && !r.expect_violation;
  for (const auto& r : sp.records) sp_w2 = sp_w2 || !r.expect_violation;
  const double a = max_record(lat, "prop33.rank_two_identity");
  const double b = max_record(sp, "prop33.rank_two_identity");
  const bool separated = b > 1e4 * std::max(a, 1e-300);
  return {lat_w2 && a < 1e-6 && !sp_w2 && b > 1e-2 && separated,
          "latitude circle residual " + sci(a) + " (W2), spiral residual " + sci(b) + (sp_w2 ? " (W2)" : " (not W2)") +
              ", ratio " + sci(b / std::max(a, 1e-300))};
}

Outcome umbilical_transfer() {
  const CatalogEntry s = pseudo_sphere(2, 0, 1.0);
  const SurfaceCurve lat = latitude_circle();
  const Curve amb = compose_chart_curve(s.chart, lat.parameter_curve);
  const WCurveVerdict v = classify_w_curve(amb, s.chart.ambient(), 20, {-1.0, 1.0});
  const double k1 = v.curvature_means.empty() ? 0.0 : v.curvature_means[0];
  const double err = std::abs(k1 - std::sqrt(2.0));
  const PropositionReport r = verify_prop34(s, lat.parameter_curve, {-1.0, 1.0}, 8);
  return {v.rank == 2 && v.is_w_curve && err < 1e-6 && r.hypothesis_met && r.passed(),
          "ambient rank " + std::to_string(v.rank) + ", k1 - sqrt(2) = " + sci(err) + " (< 1e-6), identity transfer " +
              sci(max_record(r, "prop34.residual_transfer"))};
}

Outcome isotropy() {
  const double expected[] = {1.0, 1.0, -1.0};
  bool ok = true;
  double spread = 0.0, cross = 0.0, value_err = 0.0;
  int i = 0;
  for (const CatalogEntry& e : quadrics()) {
    const auto pts = sample_points(e, 6, 99);
    const IsotropyProfile p = pseudo_isotropy_profile(e.chart, pts, 24);
    spread = std::max(spread, p.global_spread);
    cross = std::max(cross, p.cross_residual);
    value_err = std::max({value_err, std::abs(p.max_value - expected[i]), std::abs(p.min_value - expected[i])});
    ok = ok && p.evaluated_points == 6;
    ++i;
  }
  return {ok && spread < 1e-8 && cross < 1e-8 && value_err < 1e-8,
          "L spread " + sci(spread) + ", |L - c| " + sci(value_err) + ", cross term " + sci(cross) + " (< 1e-8)"};
}

Outcome third_form() {
  double spread = 0.0, value = 0.0;
  bool ok = true;
  for (const CatalogEntry& e : quadrics()) {
    const auto pts = sample_points(e, 4, 5);
    const PropositionReport r = verify_thm33(e, pts, 50, tangent_samples(e, 2, 5));
    ok = ok && r.hypothesis_met && r.passed();
    spread = std::max(spread, max_record(r, "thm33.third_form_spread"));
    for (const Vector& u : pts) {
      const ExtrinsicFields f(e.chart, u, 3);
      for (const UnitTangent& X : unit_tangent_sweep(extrinsic_state(f, u), 50)) {
        const Vector t = f.nabla_h_at(X.coords, X.coords, X.coords);
        value = std::max(value, std::abs(e.chart.ambient().inner(t, t)));
      }
    }
  }
  return {ok && spread < 1e-8 && value < 1e-8,
          "spread " + sci(spread) + " over 200 tangents per geometry, max |value| " + sci(value) + " (< 1e-8)"};
}

ImmersionChart random_graph(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> coef(-0.6, 0.6);
  std::vector<std::tuple<int, int, double>> terms;
  for (int i = 0; i <= 4; ++i)
    for (int j = 0; i + j <= 4; ++j)
      if (i + j >= 2) terms.emplace_back(i, j, coef(rng));
  return ImmersionChart::analytic(
      2, MetricSignature(3, 0), 0, Box{{{-1, 1}, {-1, 1}}},
      [terms](std::span<const Taylor> u) {
        Taylor z = u[0] * 0.0;
        for (auto [i, j, a] : terms) z += a * pow(u[0], i) * pow(u[1], j);
        return SeriesVector{u[0], u[1], z};
      },
      "random_graph");
}

Outcome structural() {
  std::mt19937_64 rng(1234);
  std::uniform_real_distribution<double> coord(-0.3, 0.3), angle(0.0, 2.0 * std::numbers::pi);
  StructuralResiduals worst;
  double drift = 0.0;
  for (int g = 0; g < 5; ++g) {
    const ImmersionChart chart = random_graph(rng);
    for (int k = 0; k < 4; ++k) {
      Vector u(2);
      u << coord(rng), coord(rng);
      const StructuralResiduals r = structural_residuals(chart, u);
      worst.duality = std::max(worst.duality, r.duality);
      worst.normality = std::max(worst.normality, r.normality);
      worst.codazzi = std::max(worst.codazzi, r.codazzi);
      const ExtrinsicState st = extrinsic_state(chart, u);
      const double a = angle(rng);
      Vector X = std::cos(a) * st.frame_coordinates.col(0) + std::sin(a) * st.frame_coordinates.col(1);
      const double len = 0.4;
      const GeodesicPath path = integrate_geodesic(chart, u, X, len);
      drift = std::max(drift, path.max_speed_drift / len);
    }
  }
  return {worst.codazzi < 1e-5 && worst.duality < 1e-8 && worst.normality < 1e-8 && drift < 1e-9,
          "Codazzi " + sci(worst.codazzi) + " (< 1e-5), duality " + sci(worst.duality) + ", normality " +
              sci(worst.normality) + " (< 1e-8), speed drift " + sci(drift) + " per unit length (< 1e-9)"};
}

Outcome negative_controls() {
  const CatalogEntry cyl = cylinder();
  Vector u = Vector::Zero(2), X(2);
  X << 1.0, 1.0;
  X /= std::sqrt(2.0);
  const NormalSection sec = trace_normal_section(cyl.chart, u, X);
  const CatalogCurve el = ellipse_curve();
  const WCurveVerdict v = classify_w_curve(el.curve, el.signature, 20, el.sampling);
  const CatalogEntry g = generic_graph();
  const auto pts = sample_points(g, 5, 8);
  const PointCheck umb = is_totally_umbilical(g.chart, pts);
  const IsotropyProfile iso = pseudo_isotropy_profile(g.chart, pts, 12);
  const bool ok = !sec.geodesic && !v.is_w_curve && !umb.holds && iso.global_spread > 1e-8;
  return {ok, "oblique cylinder section tangential acceleration " + sci(sec.max_tangential_acceleration) +
                  (sec.geodesic ? " (geodesic)" : " (not geodesic)") + ", ellipse " +
                  (v.is_w_curve ? "W-curve" : "not a W-curve") + ", generic graph umbilicity residual " +
                  sci(umb.residual) + ", L spread " + sci(iso.global_spread)};
}

Outcome determinism() {
  const std::string suites =
      R"("suites": ["frenet", "wcurve", "extrinsic", "normal_sections", "prop31", "prop32", "prop33", "prop34", "lemma31", "thm33"])";
  bool same = true;
  std::size_t rows = 0;
  for (const char* g : {"pseudo_sphere:n=2,r=0,c=1", "pseudo_sphere:n=2,r=1,c=1", "pseudo_hyperbolic:n=2,r=0,c=-1"}) {
    const Scenario sc =
        parse_scenario(std::string(R"({"geometry": ")") + g + R"(", )" + suites + R"(, "samples": 4, "seed": 11})");
    const std::string a = report_csv(run_scenario(sc, {1, 1.0}));
    const std::string b = report_csv(run_scenario(sc, {3, 1.0}));
    same = same && a == b;
    rows += static_cast<std::size_t>(std::count(a.begin(), a.end(), '\n')) - 1;
  }
  return {same && rows > 0, std::to_string(rows) + " CSV rows, two runs byte-identical: " + (same ? "yes" : "no")};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"Frenet recursion on six catalog curves", frenet_recursion},
      {"third-derivative identity for circle and hyperbola", plane_w_curves},
      {"fourth-derivative identity for Euclidean and Lorentzian helices", helices},
      {"quadric normal sections are 2-planar geodesics", quadric_sections},
      {"section derivatives against h, nabla h, nabla nabla h", section_derivatives},
      {"Frenet data of geodesic sections", section_frenet},
      {"intrinsic rank-2 W-curve detection with spiral control", intrinsic_rank_two},
      {"latitude circle is an ambient rank-2 W-curve with k1 = sqrt 2", umbilical_transfer},
      {"constant pseudo-isotropy L = c on quadrics", isotropy},
      {"constant third fundamental form on quadrics", third_form},
      {"structural identities on random graphs", structural},
      {"negative controls flagged", negative_controls},
      {"deterministic reports", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}

#include <cmath>
#include <numbers>

#include "doctest.h"
#include "helixlab/catalog.hpp"
#include "helixlab/errors.hpp"
#include "helixlab/normal_sections.hpp"

using namespace helixlab;

namespace {
constexpr double kPi = std::numbers::pi;

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

Vector unit(const ImmersionChart& chart, const Vector& u, const Vector& X) {
  const ExtrinsicState st = extrinsic_state(chart, u);
  return X / std::sqrt(std::abs(X.dot(st.metric * X)));
}

const CheckRecord& find(const PropositionReport& r, const std::string& id) {
  for (const auto& rec : r.records)
    if (rec.check_id == id) return rec;
  FAIL("missing record " << id);
  return r.records.front();
}
}  // namespace

TEST_CASE("tolerances: named access and scaling") {
  Tolerances t;
  REQUIRE(t.find("geodesic") != nullptr);
  CHECK(*t.find("geodesic") == 1e-6);
  CHECK(t.find("nope") == nullptr);
  CHECK(t.items().size() == 24);
  const Tolerances s = t.scaled(10.0);
  CHECK(s.rank == doctest::Approx(1e-7));
  CHECK(s.fourth_derivative == doctest::Approx(1e-3));
}

TEST_CASE("records: negative controls pass on violation") {
  CHECK(make_record("a", "g", Vector(), Vector(), 1e-3, 1e-6).pass == false);
  CHECK(make_record("a", "g", Vector(), Vector(), 1e-3, 1e-6, true).pass == true);
  CHECK(make_record("a", "g", Vector(), Vector(), 1e-9, 1e-6, true).pass == false);
}

TEST_CASE("plane: every normal section is a straight line") {
  const CatalogEntry e = plane();
  const Vector u = vec({0.2, -0.3});
  const Vector X = unit(e.chart, u, vec({1.0, 0.7}));
  const NormalSection sec = trace_normal_section(e.chart, u, X);
  CHECK(sec.planarity_order == 1);
  CHECK(sec.geodesic);
  CHECK(sec.trace.size() == 201);
  CHECK(sec.max_slice_distance < 1e-12);
  // points lie on p0 + s X
  for (const auto& pt : sec.trace) CHECK((pt.point - (sec.base_point + pt.s * sec.direction_vector)).norm() < 1e-10);
}

TEST_CASE("unit sphere: normal sections are great circles") {
  const CatalogEntry e = pseudo_sphere(2, 0, 1.0);
  const Vector u = vec({1.1, 0.4});
  const Vector X = unit(e.chart, u, vec({0.3, -0.8}));
  SectionOptions opt;
  opt.span = 2.0;
  const NormalSection sec = trace_normal_section(e.chart, u, X, opt);
  double dev = 0.0;
  for (const auto& pt : sec.trace) {
    const Vector expected = std::cos(pt.s) * sec.base_point + std::sin(pt.s) * sec.direction_vector;
    dev = std::max(dev, (pt.point - expected).norm());
  }
  CHECK(dev < 1e-7);
  CHECK(sec.planarity_order == 2);
  CHECK(sec.geodesic);
  CHECK(sec.rank_margins[2] > 1e-3);
  CHECK(sec.max_chart_residual < 1e-12);
  CHECK(sec.trace.front().s == doctest::Approx(-1.0));
  CHECK(sec.trace.back().s == doctest::Approx(1.0));
}

TEST_CASE("de Sitter surface: spacelike and timelike sections are 2-planar geodesics") {
  const CatalogEntry e = pseudo_sphere(2, 1, 1.0);
  const Vector u = vec({0.3, 0.2});
  const ExtrinsicState st = extrinsic_state(e.chart, u);
  for (int a = 0; a < 2; ++a) {
    const Vector X = st.frame_coordinates.col(a);
    const NormalSection sec = trace_normal_section(e.chart, u, X);
    CHECK(sec.sign == st.tangent_signs[static_cast<std::size_t>(a)]);
    CHECK(sec.planarity_order == 2);
    CHECK(sec.geodesic);
    // the section stays on the quadric
    for (const auto& pt : sec.trace) CHECK(std::abs(e.chart.ambient().norm_squared(pt.point) - 1.0) < 1e-10);
  }
}

TEST_CASE("cylinder: the 45 degree section is an ellipse, not a geodesic") {
  const CatalogEntry e = cylinder();
  const Vector u = vec({0.0, 0.0});
  const Vector X = vec({1.0, 1.0}) / std::sqrt(2.0);
  const NormalSection sec = trace_normal_section(e.chart, u, X);
  CHECK_FALSE(sec.geodesic);
  CHECK(sec.max_tangential_acceleration > 1e-3);
  CHECK(sec.planarity_order == 2);
  // at the base point the acceleration is normal
  const SectionGerm g = section_germ(e.chart, u, X, 6);
  const ExtrinsicState st = extrinsic_state(e.chart, u);
  CHECK(st.tangential_part(derivative_at(g.ambient, 2)).norm() < 1e-12);
  // ellipse x^2 + (y^2 + z^2)/2 = 1 in the slice
  for (const auto& pt : sec.trace) {
    const Vector p = pt.point;
    CHECK(std::abs(p[0] * p[0] + 0.5 * (p[1] * p[1] + p[2] * p[2]) - 1.0) < 1e-10);
  }
}

TEST_CASE("cylinder: rulings and circles are geodesic sections") {
  const CatalogEntry e = cylinder();
  const Vector u = vec({0.3, 0.1});
  CHECK(trace_normal_section(e.chart, u, vec({0.0, 1.0})).planarity_order == 1);
  const NormalSection circle = trace_normal_section(e.chart, u, vec({1.0, 0.0}));
  CHECK(circle.geodesic);
  CHECK(circle.planarity_order == 2);
}

TEST_CASE("cubic graph: sections leave the plane of the first two derivatives") {
  const CatalogEntry e = cubic_graph();
  const Vector u = vec({0.3, 0.1});
  const Vector X = unit(e.chart, u, vec({1.0, 0.4}));
  const NormalSection sec = trace_normal_section(e.chart, u, X);
  CHECK(sec.planarity_order != 1);
  CHECK_FALSE(sec.geodesic);
  const PlanarityProfile p = planarity_order(e.chart, sec, 2, 1e-8);
  CHECK(p.order == sec.planarity_order);
}

TEST_CASE("section germ reproduces a traced node") {
  const CatalogEntry e = veronese();
  const Vector u = vec({1.2, 0.3});
  const Vector X = unit(e.chart, u, vec({0.4, 0.9}));
  const SectionGerm g = section_germ(e.chart, u, X, 6);
  SectionOptions opt;
  opt.span = 0.2;
  const NormalSection sec = trace_normal_section(e.chart, u, X, opt);
  const SectionPoint& last = sec.trace.back();
  Vector approx = Vector::Zero(5);
  double fact = 1.0;
  for (int k = 0; k <= 6; ++k) {
    if (k > 0) fact *= k;
    approx += std::pow(last.s, k) / fact * (k == 0 ? values(g.ambient) : derivative_at(g.ambient, k));
  }
  CHECK((approx - last.point).norm() < 1e-8);
  CHECK(sec.planarity_order == 2);
}

TEST_CASE("null sections are rejected") {
  const CatalogEntry e = pseudo_sphere(2, 1, 1.0);
  const Vector u = vec({0.0, 0.2});
  const ExtrinsicState st = extrinsic_state(e.chart, u);
  const Vector X = st.frame_coordinates.col(0) + st.frame_coordinates.col(1);
  CHECK_THROWS_AS(section_germ(e.chart, u, X, 4), DimensionError);
}

TEST_CASE("derivatives of geodesic sections match the extrinsic identities") {
  for (const CatalogEntry& e : {pseudo_sphere(2, 0, 1.0), pseudo_sphere(2, 1, 0.5), veronese(),
                                pseudo_hyperbolic(2, 0, -1.0), pseudo_sphere(3, 0, 2.0, vec({0.1, 0.2, 0.0, 0.3}))}) {
    CAPTURE(e.name);
    for (const TangentSample& s : tangent_samples(e, 3, 7)) {
      const PropositionReport r = verify_prop31(e, s.u, s.direction);
      for (const auto& rec : r.records) {
        CAPTURE(rec.check_id);
        CHECK(rec.pass);
      }
    }
  }
}

TEST_CASE("the third-derivative identity is not vacuous") {
  // Veronese: nabla h = 0, the third derivative is -A_{h(X,X)} X = -|X|^2 ... != 0
  const CatalogEntry e = veronese();
  const Vector u = vec({1.0, 0.2});
  const Vector X = unit(e.chart, u, vec({1.0, 0.5}));
  const SectionGerm g = section_germ(e.chart, u, X, 6);
  CHECK(derivative_at(g.ambient, 3).norm() > 0.1);
  CHECK(derivative_at(g.ambient, 4).norm() > 0.1);
}

TEST_CASE("non-geodesic sections are refused by the derivative check") {
  const CatalogEntry e = cylinder();
  CHECK_THROWS_AS(verify_prop31(e, vec({0.0, 0.0}), vec({1.0, 1.0}) / std::sqrt(2.0)), NotGeodesicSection);
}

TEST_CASE("Frenet data of sections: principal normal, shape operator, decomposition") {
  for (const CatalogEntry& e : {pseudo_sphere(2, 0, 1.0), pseudo_sphere(2, 1, 1.0), veronese(),
                                pseudo_hyperbolic(2, 0, -1.0)}) {
    CAPTURE(e.name);
    const PropositionReport r = verify_prop32(e, tangent_samples(e, 3, 11));
    CHECK(r.hypothesis_met);
    for (const auto& rec : r.records) {
      CAPTURE(rec.check_id);
      CAPTURE(rec.residual);
      CHECK(rec.pass);
    }
  }
}

TEST_CASE("latitude circle is an intrinsic rank-2 W-curve; the spiral is not") {
  const CatalogEntry e = pseudo_sphere(2, 0, 1.0);
  const SurfaceCurve lat = latitude_circle();
  const PropositionReport r = verify_prop33_curve(e, lat.parameter_curve, {-1.0, 1.0}, 6);
  CHECK(r.passed());
  const CheckRecord& k = find(r, "prop33.intrinsic_k1_spread");
  CHECK(k.note.find("1.000000") != std::string::npos);
  for (const auto& rec : r.records)
    if (rec.check_id == "prop33.rank_two_identity") CHECK(rec.residual < 1e-9);

  const PropositionReport sp = verify_prop33_curve(e, latitude_spiral().parameter_curve, {-1.0, 1.0}, 6);
  CHECK(sp.passed());  // negative controls
  for (const auto& rec : sp.records) {
    CHECK(rec.expect_violation);
    if (rec.check_id == "prop33.rank_two_identity") CHECK(rec.residual > 1e-4);
  }
}

TEST_CASE("normal sections of the sphere are intrinsic geodesics") {
  const CatalogEntry e = pseudo_sphere(2, 0, 1.0);
  const PropositionReport r = verify_prop33(e, vec({1.0, 0.3}), vec({1.0, 0.0}));
  CHECK(r.passed());
  CHECK_FALSE(r.notes.empty());
}

TEST_CASE("umbilical transfer: latitude circle is an ambient rank-2 W-curve") {
  const CatalogEntry e = pseudo_sphere(2, 0, 1.0);
  const SurfaceCurve lat = latitude_circle();
  const PropositionReport r = verify_prop34(e, lat.parameter_curve, {-1.0, 1.0}, 5);
  CHECK(r.hypothesis_met);
  for (const auto& rec : r.records) {
    CAPTURE(rec.check_id);
    CAPTURE(rec.residual);
    CHECK(rec.pass);
  }
  CHECK(find(r, "prop34.ambient_k1_spread").note.find("1.414214") != std::string::npos);

  const PropositionReport g = verify_prop34(e, great_circle().parameter_curve, {-1.0, 1.0}, 5);
  CHECK(g.passed());
  CHECK_FALSE(g.notes.empty());
}

TEST_CASE("umbilical transfer refuses a non-umbilical chart") {
  const CatalogEntry e = cylinder();
  const Curve c = Curve::analytic(2, [](const Taylor& t) { return SeriesVector{t, t * 0.0}; }, {-2.0, 2.0});
  CHECK_FALSE(verify_prop34(e, c, {-0.5, 0.5}, 3).hypothesis_met);
}

TEST_CASE("third fundamental form and isotropy on quadrics and the Veronese surface") {
  for (const CatalogEntry& e : {pseudo_sphere(2, 0, 1.0), pseudo_sphere(2, 1, 1.0), veronese()}) {
    CAPTURE(e.name);
    const auto pts = sample_points(e, 3, 5);
    const auto checks = tangent_samples(e, 2, 9);
    const PropositionReport t = verify_thm33(e, pts, 8, checks);
    CHECK(t.hypothesis_met);
    CHECK(t.passed());
    const PropositionReport l = verify_lemma31(e, pts, 8, checks);
    CHECK(l.hypothesis_met);
    for (const auto& rec : l.records) {
      CAPTURE(rec.check_id);
      CHECK(rec.pass);
    }
  }
}

TEST_CASE("isotropy of a non-umbilical graph is diagnostic only") {
  const CatalogEntry e = aniso_graph();
  const auto pts = sample_points(e, 3, 5);
  const PropositionReport l = verify_lemma31(e, pts, 8, tangent_samples(e, 2, 3));
  CHECK_FALSE(l.hypothesis_met);
  CHECK(find(l, "lemma31.isotropy_spread").residual > 1.0);
  CHECK(l.passed());
}

TEST_CASE("section survey records") {
  const CatalogEntry e = pseudo_sphere(2, 0, 1.0);
  const PropositionReport r = check_normal_sections(e, tangent_samples(e, 2, 1));
  CHECK(r.records.size() == 10);
  CHECK(r.passed());
  const PropositionReport c = check_normal_sections(cylinder(), {{vec({0.0, 0.0}), vec({1.0, 1.0}) / std::sqrt(2.0), 1}});
  CHECK(find(c, "sections.geodesic").expect_violation);
  CHECK(c.passed());
}

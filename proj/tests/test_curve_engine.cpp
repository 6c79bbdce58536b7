#include <cmath>
#include <numbers>

#include "doctest.h"
#include "helixlab/curve_engine.hpp"
#include "helixlab/errors.hpp"

using namespace helixlab;

namespace {
const MetricSignature E2(2, 0);
const MetricSignature E2_1(2, 1);
const MetricSignature E3(3, 0);
const MetricSignature E3_1(3, 1);

Curve helix(double a, double b) {
  return Curve::analytic(3, [a, b](const Taylor& t) { return SeriesVector{a * cos(t), a * sin(t), b * t}; });
}

Curve lorentz_helix(double a, double b) {
  const double w = 1.0 / std::sqrt(a * a - b * b);
  return Curve::analytic(
      3, [a, b, w](const Taylor& s) { return SeriesVector{b * w * s, a * cos(w * s), a * sin(w * s)}; });
}

double max_of(const std::vector<double>& xs) {
  double m = 0.0;
  for (double x : xs) m = std::max(m, x);
  return m;
}
}  // namespace

TEST_CASE("a straight line has osculating order one") {
  const Curve line = Curve::analytic(3, [](const Taylor& t) { return SeriesVector{t, 2.0 * t, 0.5 * t}; });
  const FrenetApparatus a = frenet_apparatus(line, 0.3, E3);
  CHECK(a.order == 1);
  CHECK(a.curvatures.empty());
  const WCurveVerdict v = classify_w_curve(line, E3, 5, {0.0, 1.0});
  CHECK(v.is_w_curve);
  CHECK(v.rank == 1);
}

TEST_CASE("unit circle has k1 = 1 and satisfies the Frenet equations") {
  const Curve circle = Curve::analytic(2, [](const Taylor& t) { return SeriesVector{cos(t), sin(t)}; });
  const FrenetApparatus a = frenet_apparatus(circle, 0.7, E2);
  REQUIRE(a.order == 2);
  CHECK(a.curvatures[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(a.curvature_rates[0]) < 1e-12);
  CHECK(max_of(frenet_residuals(a)) < 1e-12);
  const WCurveVerdict v = classify_w_curve(circle, E2, 9, {0.0, 6.0});
  CHECK(v.is_w_curve);
  CHECK(v.identity_residual < 1e-12);
}

TEST_CASE("radius-r circle traversed at any speed has k1 = 1/r") {
  for (double r : {0.5, 2.0, 3.0}) {
    const Curve c = Curve::analytic(2, [r](const Taylor& t) { return SeriesVector{r * cos(3.0 * t), r * sin(3.0 * t)}; });
    const FrenetApparatus a = frenet_apparatus(c, 0.2, E2);
    CHECK(a.curvatures[0] == doctest::Approx(1.0 / r).epsilon(1e-12));
  }
}

TEST_CASE("hyperbola in the Lorentz plane") {
  const Curve h = Curve::analytic(2, [](const Taylor& t) { return SeriesVector{cosh(t), sinh(t)}; });
  const FrenetApparatus a = frenet_apparatus(h, 0.0, E2_1);
  REQUIRE(a.order == 2);
  CHECK(a.signs[0] == 1);
  CHECK(a.signs[1] == -1);
  CHECK(a.curvatures[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(max_of(frenet_residuals(a)) < 1e-12);
  // V2 = -gamma'' at the vertex
  CHECK((a.frame[1] + a.curve_derivatives[2]).norm() < 1e-12);
}

TEST_CASE("Euclidean helix curvatures") {
  for (auto [a, b] : {std::pair{1.0, 1.0}, std::pair{2.0, 0.5}, std::pair{0.7, 1.9}}) {
    const double c = a * a + b * b;
    const FrenetApparatus f = frenet_apparatus(helix(a, b), 0.4, E3);
    REQUIRE(f.order == 3);
    CHECK(f.curvatures[0] == doctest::Approx(a / c).epsilon(1e-11));
    CHECK(f.curvatures[1] == doctest::Approx(b / c).epsilon(1e-11));
    CHECK(max_of(frenet_residuals(f)) < 1e-11);
    const WCurveVerdict v = classify_w_curve(helix(a, b), E3, 7, {-1.0, 2.0});
    CHECK(v.is_w_curve);
    CHECK(v.rank == 3);
    CHECK(v.identity_residual < 1e-10);
  }
}

TEST_CASE("Lorentzian helix curvatures and causal signs") {
  for (auto [a, b] : {std::pair{2.0, 1.0}, std::pair{1.5, 0.3}}) {
    const double c = a * a - b * b;
    const FrenetApparatus f = frenet_apparatus(lorentz_helix(a, b), 0.1, E3_1);
    REQUIRE(f.order == 3);
    CHECK(f.signs == std::vector<int>{1, 1, -1});
    CHECK(f.curvatures[0] == doctest::Approx(a / c).epsilon(1e-11));
    CHECK(f.curvatures[1] == doctest::Approx(b / c).epsilon(1e-11));
    CHECK(max_of(frenet_residuals(f)) < 1e-11);
    const WCurveVerdict v = classify_w_curve(lorentz_helix(a, b), E3_1, 5, {0.0, 3.0});
    CHECK(v.is_w_curve);
    CHECK(v.identity_residual < 1e-10);
  }
}

TEST_CASE("curvatures match the norm-ratio oracle on a generic curve") {
  // k_{j-1} = n_j / n_{j-1}, with n_j the pseudo-norm of the j-th Gram-Schmidt residual of gamma^(j)
  const Curve c = Curve::analytic(
      4, [](const Taylor& t) { return SeriesVector{t, 0.5 * t * t, t * t * t / 6.0 + 0.1 * t, 0.05 * t * t * t * t}; });
  const MetricSignature sig(4, 0);
  const FrenetApparatus f = frenet_apparatus(c, 0.0, sig);
  REQUIRE(f.order == 4);
  // for a unit speed germ, the GS residual norms of successive derivatives give the curvature products
  const Curve s = arclength_reparametrize(c, 0.0, 0.5, sig);
  const CurveJet j = s.jet(0.0, 5);
  std::vector<Vector> d;
  for (int k = 1; k <= 4; ++k) d.push_back(j.derivative(k));
  const PseudoFrame gs = pseudo_gram_schmidt(d, sig);
  std::vector<double> n;
  for (int k = 0; k < 4; ++k) {
    Vector w = d[static_cast<std::size_t>(k)];
    for (int i = 0; i < k; ++i) w -= sig.inner(w, gs.vectors[static_cast<std::size_t>(i)]) * gs.vectors[static_cast<std::size_t>(i)];
    n.push_back(w.norm());
  }
  // n_j = k_1 ... k_{j-1}
  CHECK(f.curvatures[0] == doctest::Approx(n[1] / n[0]).epsilon(1e-7));
  CHECK(f.curvatures[1] == doctest::Approx(n[2] / n[1]).epsilon(1e-7));
  CHECK(f.curvatures[2] == doctest::Approx(n[3] / n[2]).epsilon(1e-7));
  CHECK(max_of(frenet_residuals(f)) < 1e-10);
}

TEST_CASE("ellipse is not a W-curve and its curvature matches the plane formula") {
  const double a = 2.0, b = 1.0;
  const Curve e = Curve::analytic(2, [a, b](const Taylor& t) { return SeriesVector{a * cos(t), b * sin(t)}; });
  for (double t : {0.0, 0.5, 1.2}) {
    const double st = std::sin(t), ct = std::cos(t);
    const double expected = a * b / std::pow(a * a * st * st + b * b * ct * ct, 1.5);
    CHECK(frenet_apparatus(e, t, E2).curvatures[0] == doctest::Approx(expected).epsilon(1e-11));
  }
  const WCurveVerdict v = classify_w_curve(e, E2, 9, {0.0, 3.0});
  CHECK_FALSE(v.is_w_curve);
  CHECK(v.curvature_deviations[0] > 0.1);
}

TEST_CASE("curvatures are invariant under reparametrization") {
  const Curve h = helix(1.3, 0.6);
  const Curve fast = h.affine_reparametrized(2.5, 0.1);
  const FrenetApparatus a = frenet_apparatus(h, 0.1 + 2.5 * 0.3, E3);
  const FrenetApparatus b = frenet_apparatus(fast, 0.3, E3);
  CHECK(a.curvatures[0] == doctest::Approx(b.curvatures[0]).epsilon(1e-12));
  CHECK(a.curvatures[1] == doctest::Approx(b.curvatures[1]).epsilon(1e-12));
  const Curve cubic = Curve::analytic(3, [](const Taylor& t) {
    const Taylor u = t + 0.2 * t * t * t;
    return SeriesVector{1.3 * cos(u), 1.3 * sin(u), 0.6 * u};
  });
  const FrenetApparatus c = frenet_apparatus(cubic, 0.4, E3);
  CHECK(c.curvatures[0] == doctest::Approx(a.curvatures[0]).epsilon(1e-11));
  CHECK(c.curvatures[1] == doctest::Approx(a.curvatures[1]).epsilon(1e-11));
}

TEST_CASE("finite-difference curves give matching curvatures") {
  const Curve fd = Curve::sampled(
      3, [](double t) { Vector v(3); v << 2.0 * std::cos(t), 2.0 * std::sin(t), 0.5 * t; return v; }, {}, "helix");
  const FrenetApparatus f = frenet_apparatus(fd, 0.4, E3);
  REQUIRE(f.order == 3);
  CHECK(f.curvatures[0] == doctest::Approx(2.0 / 4.25).epsilon(1e-7));
  CHECK(f.curvatures[1] == doctest::Approx(0.5 / 4.25).epsilon(1e-5));
}

TEST_CASE("null tangent is rejected") {
  const Curve n = Curve::analytic(2, [](const Taylor& t) { return SeriesVector{t, t}; });
  CHECK_THROWS_AS(frenet_apparatus(n, 0.0, E2_1), NullSegment);
}

TEST_CASE("null principal normal is rejected") {
  // gamma'' is null and nonzero
  const Curve c = Curve::analytic(3, [](const Taylor& t) {
    const Taylor q = 0.5 * t * t;
    return SeriesVector{q, t, q};
  });
  CHECK_THROWS_AS(frenet_apparatus(c, 0.0, E3_1), NullIntermediate);
}

TEST_CASE("arclength of a fast circle") {
  const Curve c = Curve::analytic(2, [](const Taylor& t) { return SeriesVector{cos(3.0 * t), sin(3.0 * t)}; });
  const Curve s = arclength_reparametrize(c, 0.0, 2.0 * std::numbers::pi / 3.0, E2);
  CHECK(s.domain().hi == doctest::Approx(2.0 * std::numbers::pi).epsilon(1e-11));
  const CurveJet j = s.jet(1.0, 3);
  CHECK((j.position - c.position(1.0 / 3.0)).norm() < 1e-10);
  CHECK(j.derivative(1).norm() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("arclength of a timelike hyperbola branch") {
  const Curve h = Curve::analytic(2, [](const Taylor& t) { return SeriesVector{sinh(t), cosh(t)}; });
  const Curve s = arclength_reparametrize(h, -1.0, 2.0, E2_1);
  CHECK(s.domain().hi == doctest::Approx(2.0).epsilon(1e-11));
  const CurveJet j = s.jet(1.5, 2);
  CHECK((j.position - h.position(0.5)).norm() < 1e-10);
  CHECK(E2_1.inner(j.derivative(1), j.derivative(1)) == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("arclength of a parabola matches the closed form") {
  const Curve p = Curve::analytic(2, [](const Taylor& t) { return SeriesVector{t, t * t}; });
  const Curve s = arclength_reparametrize(p, 0.0, 1.0, E2);
  const double exact = 0.5 * std::sqrt(5.0) + 0.25 * std::asinh(2.0);
  CHECK(s.domain().hi == doctest::Approx(exact).epsilon(1e-11));
}

TEST_CASE("arclength through a null point fails") {
  const Curve c = Curve::analytic(2, [](const Taylor& t) { return SeriesVector{t, 0.5 * t * t}; });
  CHECK_THROWS_AS(arclength_reparametrize(c, 0.0, 2.0, E2_1), NullSegment);
}

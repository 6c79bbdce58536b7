#include <cmath>
#include <vector>

#include "doctest.h"
#include "helixlab/errors.hpp"
#include "helixlab/taylor.hpp"
#include "test_support.hpp"

using namespace helixlab;

TEST_CASE("monomial basis indexing is consistent with enumeration") {
  for (int vars = 1; vars <= 4; ++vars) {
    for (int deg = 0; deg <= 5; ++deg) {
      const auto b = MonomialBasis::get(vars, deg);
      for (std::size_t i = 0; i < b->size(); ++i) CHECK(b->index_of(b->exponents(i)) == i);
      // graded prefix property
      if (deg > 0) {
        const auto lower = MonomialBasis::get(vars, deg - 1);
        for (std::size_t i = 0; i < lower->size(); ++i) CHECK(lower->exponents(i) == b->exponents(i));
      }
    }
  }
}

TEST_CASE("partials of a bivariate function") {
  const double x0 = 0.4, y0 = -0.3;
  const Taylor x = Taylor::variable(2, 4, 0, x0);
  const Taylor y = Taylor::variable(2, 4, 1, y0);
  const Taylor f = sin(x) * exp(y) + x * x * y;
  const int dx2dy[] = {2, 1};
  CHECK(f.partial(dx2dy) == doctest::Approx(-std::sin(x0) * std::exp(y0) + 2.0).epsilon(1e-14));
  const int dx3dy[] = {3, 1};
  CHECK(f.partial(dx3dy) == doctest::Approx(-std::cos(x0) * std::exp(y0)).epsilon(1e-14));
  const int dy4[] = {0, 4};
  CHECK(f.partial(dy4) == doctest::Approx(std::sin(x0) * std::exp(y0)).epsilon(1e-14));
  const int too_high[] = {3, 2};
  CHECK(f.partial(too_high) == 0.0);
}

TEST_CASE("elementary functions match their derivatives") {
  const double a = 0.7;
  const Taylor t = Taylor::variable(1, 5, 0, a);
  const Taylor r = 1.0 / t;
  CHECK(r.derivative_at(3) == doctest::Approx(-6.0 / std::pow(a, 4)));
  const Taylor s = sqrt(t);
  CHECK(s.derivative_at(2) == doctest::Approx(-0.25 * std::pow(a, -1.5)));
  const Taylor l = log(t);
  CHECK(l.derivative_at(4) == doctest::Approx(-6.0 / std::pow(a, 4)));
  const Taylor h = cosh(t) * cosh(t) - sinh(t) * sinh(t);
  CHECK(h.value() == doctest::Approx(1.0));
  for (int k = 1; k <= 5; ++k) CHECK(std::abs(h.derivative_at(k)) < 1e-12);
  const Taylor q = (t * t + 1.0) / (t - 3.0);
  const double expected1 = (2 * a * (a - 3) - (a * a + 1)) / ((a - 3) * (a - 3));
  CHECK(q.derivative_at(1) == doctest::Approx(expected1));
  CHECK(pow(t, 3).derivative_at(3) == doctest::Approx(6.0));
  CHECK(pow(t, -2).derivative_at(1) == doctest::Approx(-2.0 / std::pow(a, 3)));
}

TEST_CASE("derivative and integral") {
  const Taylor t = Taylor::variable(1, 4, 0, 0.0);
  const Taylor e = exp(t);
  const Taylor de = e.derivative(0);
  CHECK(de.degree() == 3);
  for (int k = 0; k <= 3; ++k) CHECK(de.derivative_at(k) == doctest::Approx(1.0));
  const Taylor ie = e.integral();
  CHECK(ie.degree() == 5);
  CHECK(ie.value() == 0.0);
  CHECK(ie.derivative_at(5) == doctest::Approx(1.0));
}

TEST_CASE("reversion inverts sin") {
  const Taylor t = Taylor::variable(1, 5, 0, 0.0);
  const Taylor inv = reversion(sin(t));
  // arcsin x = x + x^3/6 + 3x^5/40
  CHECK(inv[1] == doctest::Approx(1.0));
  CHECK(std::abs(inv[2]) < 1e-15);
  CHECK(inv[3] == doctest::Approx(1.0 / 6.0));
  CHECK(inv[5] == doctest::Approx(3.0 / 40.0));
  CHECK_THROWS_AS(reversion(t * t), DimensionError);
}

TEST_CASE("composition agrees with direct evaluation along a curve") {
  testing::Rng rng(5);
  auto f = [](const Taylor& x, const Taylor& y) { return sin(x * y) + exp(x) * cos(y) + pow(x, 3); };
  for (int trial = 0; trial < 20; ++trial) {
    const double x0 = rng.uniform(-1, 1), y0 = rng.uniform(-1, 1);
    const double a = rng.uniform(-1, 1), b = rng.uniform(-1, 1), c = rng.uniform(-1, 1);
    const Taylor series = f(Taylor::variable(2, 4, 0, x0), Taylor::variable(2, 4, 1, y0));
    const Taylor s = Taylor::variable(1, 4, 0, 0.0);
    const Taylor dx = a * s;
    const Taylor dy = b * s + c * s * s;
    const Taylor deltas[] = {dx, dy};
    const Taylor composed = compose(series, deltas);
    const Taylor direct = f(dx + x0, dy + y0);
    for (int k = 0; k <= 4; ++k) CHECK(std::abs(composed[k] - direct[k]) < 1e-12);
  }
}

TEST_CASE("mixed degrees truncate to the smaller one") {
  const Taylor a = Taylor::variable(2, 4, 0, 1.0);
  const Taylor b = Taylor::variable(2, 2, 1, 2.0);
  const Taylor c = a * b;
  CHECK(c.degree() == 2);
  CHECK(c.value() == doctest::Approx(2.0));
  CHECK_THROWS_AS(Taylor::variable(1, 2, 0, 0.0) + Taylor::variable(2, 2, 0, 0.0), DimensionError);
  // zero-variable series act as scalars
  const Taylor k(0, 0, 3.0);
  CHECK((k * a).derivative(0).value() == doctest::Approx(3.0));
}

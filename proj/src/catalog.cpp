#include "helixlab/catalog.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include "helixlab/errors.hpp"
#include "helixlab/submanifold_engine.hpp"

namespace helixlab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kMargin = 0.1;

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  return buf;
}

// Uniform doubles from the raw engine output so samples do not depend on the
// standard library's distribution implementation.
class SampleStream {
 public:
  explicit SampleStream(std::uint64_t seed) : engine_(seed) {}
  double uniform(double lo, double hi) {
    const double x = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * x;
  }

 private:
  std::mt19937_64 engine_;
};

Interval polar() { return {kMargin, kPi - kMargin}; }
Interval azimuth() { return {-kPi + kMargin, kPi - kMargin}; }

// Unit vector of S^k from k angles: all but the last polar, the last azimuthal.
SeriesVector sphere_map(std::span<const Taylor> angles, const Taylor& one) {
  const std::size_t k = angles.size();
  SeriesVector out;
  if (k == 0) {
    out.push_back(one);
    return out;
  }
  Taylor prefix = one;
  for (std::size_t i = 0; i < k; ++i) {
    out.push_back(prefix * cos(angles[i]));
    prefix = prefix * sin(angles[i]);
  }
  out.push_back(prefix);
  return out;
}

void add_angle_ranges(Box& domain, Box& sampling, int k) {
  for (int i = 0; i < k; ++i) {
    const bool last = i == k - 1;
    domain.ranges.push_back(last ? azimuth() : polar());
    sampling.ranges.push_back(last ? Interval{-kPi / 2, kPi / 2} : Interval{kPi / 4, 3 * kPi / 4});
  }
}

Vector center_or_zero(const Vector& center, int m) {
  if (center.size() == 0) return Vector::Zero(m);
  if (center.size() != m) throw ConfigError("center has wrong dimension");
  return center;
}

std::string center_suffix(const Vector& a) {
  if (a.isZero(0.0)) return {};
  std::string s = ",a=";
  for (Eigen::Index i = 0; i < a.size(); ++i) s += (i ? ";" : "") + fmt(a[i]);
  return s;
}

KnownFacts quadric_facts(double c, std::string origin) {
  KnownFacts f;
  f.mean_curvature_squared = c;
  f.isotropy = c;
  f.planarity_order = 2;
  f.totally_umbilical = true;
  f.parallel_mean_curvature = true;
  f.one_parallel = true;
  f.geodesic_sections = true;
  f.origin = std::move(origin);
  return f;
}

CatalogEntry graph(std::string name, std::string description, std::function<Taylor(const Taylor&, const Taylor&)> phi) {
  Box domain{{{-1.5, 1.5}, {-1.5, 1.5}}};
  Box sampling{{{-0.7, 0.7}, {-0.7, 0.7}}};
  auto chart = ImmersionChart::analytic(
      2, MetricSignature(3, 0), 0, domain,
      [phi](std::span<const Taylor> u) { return SeriesVector{u[0], u[1], phi(u[0], u[1])}; }, name);
  KnownFacts facts;
  facts.origin = "control";
  return {std::move(name), std::move(description), std::move(chart), facts, sampling};
}

}  // namespace

std::vector<Vector> sample_points(const CatalogEntry& entry, int count, std::uint64_t seed) {
  SampleStream rng(seed);
  std::vector<Vector> out;
  const int n = entry.sampling.dimension();
  for (int i = 0; i < count; ++i) {
    Vector u(n);
    for (int k = 0; k < n; ++k) {
      const Interval& r = entry.sampling.ranges[static_cast<std::size_t>(k)];
      u[k] = rng.uniform(r.lo, r.hi);
    }
    out.push_back(u);
  }
  return out;
}

std::vector<TangentSample> tangent_samples(const CatalogEntry& entry, int count, std::uint64_t seed) {
  SampleStream rng(seed ^ 0x9e3779b97f4a7c15ULL);
  const auto points = sample_points(entry, count, seed);
  std::vector<TangentSample> out;
  int next_sign = 1;
  for (const Vector& u : points) {
    const ExtrinsicState st = extrinsic_state(entry.chart, u);
    const int n = st.dimension();
    Vector space = Vector::Zero(n), time = Vector::Zero(n);
    for (int a = 0; a < n; ++a) {
      const double w = rng.uniform(-1.0, 1.0);
      (st.tangent_signs[static_cast<std::size_t>(a)] > 0 ? space : time) += w * st.frame_coordinates.col(a);
    }
    auto unit = [&](const Vector& c) {
      const double q = std::abs(c.dot(st.metric * c));
      return q > 1e-12 ? Vector(c / std::sqrt(q)) : Vector(c);
    };
    TangentSample s;
    s.u = u;
    if (time.isZero(0.0)) {
      s.direction = unit(space);
      s.sign = 1;
    } else if (space.isZero(0.0)) {
      s.direction = unit(time);
      s.sign = -1;
    } else {
      const double rap = rng.uniform(-1.2, 1.2);
      const Vector a = unit(space), b = unit(time);
      s.sign = next_sign;
      s.direction = next_sign > 0 ? Vector(std::cosh(rap) * a + std::sinh(rap) * b)
                                  : Vector(std::cosh(rap) * b + std::sinh(rap) * a);
      next_sign = -next_sign;
    }
    out.push_back(std::move(s));
  }
  return out;
}

CatalogEntry pseudo_sphere(int n, int r, double c, const Vector& center) {
  if (n < 1 || r < 0 || r > n) throw ConfigError("pseudo_sphere needs n >= 1 and 0 <= r <= n");
  if (!(c > 0.0)) throw ConfigError("pseudo_sphere needs c > 0");
  const int m = n + 1;
  const Vector a = center_or_zero(center, m);
  const double R2 = 1.0 / c;
  const int k = n - r;
  Box domain, sampling;
  for (int i = 0; i < r; ++i) {
    domain.ranges.push_back({-2.0, 2.0});
    sampling.ranges.push_back({-0.8, 0.8});
  }
  add_angle_ranges(domain, sampling, k);
  auto f = [r, k, R2, a](std::span<const Taylor> u) {
    const Taylor one = u[0] * 0.0 + 1.0;
    Taylor rho2 = one * R2;
    for (int i = 0; i < r; ++i) rho2 += u[static_cast<std::size_t>(i)] * u[static_cast<std::size_t>(i)];
    const Taylor rho = sqrt(rho2);
    SeriesVector p;
    for (int i = 0; i < r; ++i) p.push_back(u[static_cast<std::size_t>(i)] + a[i]);
    const SeriesVector w = sphere_map(u.subspan(static_cast<std::size_t>(r), static_cast<std::size_t>(k)), one);
    for (std::size_t i = 0; i < w.size(); ++i) p.push_back(rho * w[i] + a[r + static_cast<Eigen::Index>(i)]);
    return p;
  };
  std::string name = "pseudo_sphere:n=" + std::to_string(n) + ",r=" + std::to_string(r) + ",c=" + fmt(c) + center_suffix(a);
  auto chart = ImmersionChart::analytic(n, MetricSignature(m, r), r, domain, f, name);
  return {name, "pseudo-Riemannian sphere <p-a,p-a> = 1/c in E^" + std::to_string(m) + "_" + std::to_string(r),
          std::move(chart), quadric_facts(c, "classical example"), sampling};
}

CatalogEntry pseudo_hyperbolic(int n, int r, double c, const Vector& center) {
  if (n < 1 || r < 0 || r > n) throw ConfigError("pseudo_hyperbolic needs n >= 1 and 0 <= r <= n");
  if (!(c < 0.0)) throw ConfigError("pseudo_hyperbolic needs c < 0");
  const int m = n + 1;
  const Vector a = center_or_zero(center, m);
  const double R2 = -1.0 / c;
  const int k = n - r;
  Box domain, sampling;
  for (int i = 0; i < k; ++i) {
    domain.ranges.push_back({-2.0, 2.0});
    sampling.ranges.push_back({-0.8, 0.8});
  }
  add_angle_ranges(domain, sampling, r);
  auto f = [r, k, R2, a](std::span<const Taylor> u) {
    const Taylor one = u[0] * 0.0 + 1.0;
    Taylor rho2 = one * R2;
    for (int i = 0; i < k; ++i) rho2 += u[static_cast<std::size_t>(i)] * u[static_cast<std::size_t>(i)];
    const Taylor rho = sqrt(rho2);
    SeriesVector p;
    const SeriesVector w = sphere_map(u.subspan(static_cast<std::size_t>(k), static_cast<std::size_t>(r)), one);
    for (std::size_t i = 0; i < w.size(); ++i) p.push_back(rho * w[i] + a[static_cast<Eigen::Index>(i)]);
    for (int i = 0; i < k; ++i) p.push_back(u[static_cast<std::size_t>(i)] + a[r + 1 + i]);
    return p;
  };
  std::string name =
      "pseudo_hyperbolic:n=" + std::to_string(n) + ",r=" + std::to_string(r) + ",c=" + fmt(c) + center_suffix(a);
  auto chart = ImmersionChart::analytic(n, MetricSignature(m, r + 1), r, domain, f, name);
  return {name,
          "pseudo-Riemannian hyperbolic space <p-a,p-a> = 1/c in E^" + std::to_string(m) + "_" + std::to_string(r + 1),
          std::move(chart), quadric_facts(c, "classical example"), sampling};
}

CatalogEntry plane() {
  Box domain{{{-3.0, 3.0}, {-3.0, 3.0}}};
  Box sampling{{{-1.0, 1.0}, {-1.0, 1.0}}};
  auto chart = ImmersionChart::analytic(
      2, MetricSignature(3, 0), 0, domain,
      [](std::span<const Taylor> u) { return SeriesVector{u[0], u[1], 0.3 * u[0] - 0.2 * u[1]}; }, "plane");
  KnownFacts f = quadric_facts(0.0, "control");
  f.planarity_order = 1;
  return {"plane", "tilted affine plane in E^3", std::move(chart), f, sampling};
}

CatalogEntry cylinder(double radius) {
  if (!(radius > 0.0)) throw ConfigError("cylinder needs radius > 0");
  Box domain{{azimuth(), {-3.0, 3.0}}};
  Box sampling{{{-kPi / 2, kPi / 2}, {-1.0, 1.0}}};
  const std::string name = radius == 1.0 ? "cylinder" : "cylinder:radius=" + fmt(radius);
  auto chart = ImmersionChart::analytic(
      2, MetricSignature(3, 0), 0, domain,
      [radius](std::span<const Taylor> u) { return SeriesVector{radius * cos(u[0]), radius * sin(u[0]), u[1]}; },
      name);
  KnownFacts f;
  f.mean_curvature_squared = 0.25 / (radius * radius);
  f.parallel_mean_curvature = true;
  f.one_parallel = true;
  f.origin = "control";
  return {name, "circular cylinder x^2 + y^2 = R^2 in E^3", std::move(chart), f, sampling};
}

CatalogEntry paraboloid() {
  return graph("paraboloid", "paraboloid z = u^2 + v^2", [](const Taylor& u, const Taylor& v) { return u * u + v * v; });
}

CatalogEntry cubic_graph() {
  return graph("cubic_graph", "graph z = u^3", [](const Taylor& u, const Taylor&) { return u * u * u; });
}

CatalogEntry quartic_graph() {
  return graph("quartic_graph", "graph z = u^4", [](const Taylor& u, const Taylor&) { return u * u * u * u; });
}

CatalogEntry generic_graph() {
  return graph("generic_graph", "graph z = u^2 + v^3", [](const Taylor& u, const Taylor& v) { return u * u + v * v * v; });
}

CatalogEntry aniso_graph() {
  return graph("aniso_graph", "graph z = u^2 + 3 v^2", [](const Taylor& u, const Taylor& v) { return u * u + 3.0 * v * v; });
}

CatalogEntry veronese() {
  Box domain{{polar(), azimuth()}};
  Box sampling{{{kPi / 4, 3 * kPi / 4}, {-kPi / 2, kPi / 2}}};
  auto chart = ImmersionChart::analytic(
      2, MetricSignature(5, 0), 0, domain,
      [](std::span<const Taylor> u) {
        const double s3 = std::sqrt(3.0);
        const Taylor x = s3 * sin(u[0]) * cos(u[1]);
        const Taylor y = s3 * sin(u[0]) * sin(u[1]);
        const Taylor z = s3 * cos(u[0]);
        return SeriesVector{y * z / s3, x * z / s3, x * y / s3, (x * x - y * y) / (2.0 * s3),
                            (x * x + y * y - 2.0 * z * z) / 6.0};
      },
      "veronese");
  KnownFacts f;
  f.mean_curvature_squared = 1.0;
  f.isotropy = 4.0 / 3.0;
  f.planarity_order = 2;
  f.parallel_mean_curvature = true;
  f.one_parallel = true;
  f.geodesic_sections = true;
  f.origin = "classical control";
  return {"veronese", "Veronese surface S^2(sqrt 3) in E^5", std::move(chart), f, sampling};
}

CatalogEntry lorentz_cylinder(double radius) {
  if (!(radius > 0.0)) throw ConfigError("lorentz_cylinder needs radius > 0");
  Box domain{{azimuth(), {-3.0, 3.0}}};
  Box sampling{{{-kPi / 2, kPi / 2}, {-1.0, 1.0}}};
  const std::string name = radius == 2.0 ? "lorentz_cylinder" : "lorentz_cylinder:radius=" + fmt(radius);
  auto chart = ImmersionChart::analytic(
      2, MetricSignature(3, 1), 1, domain,
      [radius](std::span<const Taylor> u) { return SeriesVector{u[1], radius * cos(u[0]), radius * sin(u[0])}; },
      name);
  KnownFacts f;
  f.mean_curvature_squared = 0.25 / (radius * radius);
  f.parallel_mean_curvature = true;
  f.one_parallel = true;
  f.origin = "control";
  return {name, "timelike cylinder (t, R cos th, R sin th) in E^3_1", std::move(chart), f, sampling};
}

namespace {

struct ParsedName {
  std::string base;
  std::map<std::string, std::string> params;
};

ParsedName parse_name(const std::string& full) {
  ParsedName p;
  const auto colon = full.find(':');
  p.base = full.substr(0, colon);
  if (colon == std::string::npos) return p;
  std::stringstream ss(full.substr(colon + 1));
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("malformed geometry parameter '" + item + "'");
    if (!p.params.emplace(item.substr(0, eq), item.substr(eq + 1)).second) {
      throw ConfigError("repeated geometry parameter '" + item.substr(0, eq) + "'");
    }
  }
  return p;
}

double number(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const double x = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("parameter " + key + " is not a number: '" + text + "'");
  }
}

int integer(const std::string& key, const std::string& text) {
  const double x = number(key, text);
  if (x != std::floor(x)) throw ConfigError("parameter " + key + " must be an integer");
  return static_cast<int>(x);
}

class Params {
 public:
  explicit Params(ParsedName p) : p_(std::move(p)) {}
  double real(const std::string& key, double fallback) { return take(key) ? number(key, value_) : fallback; }
  int whole(const std::string& key, int fallback) { return take(key) ? integer(key, value_) : fallback; }
  Vector vec(const std::string& key) {
    if (!take(key)) return {};
    std::vector<double> xs;
    std::stringstream ss(value_);
    std::string item;
    while (std::getline(ss, item, ';')) xs.push_back(number(key, item));
    return Eigen::Map<Vector>(xs.data(), static_cast<Eigen::Index>(xs.size()));
  }
  void finish() const {
    if (!p_.params.empty()) throw ConfigError("unknown parameter '" + p_.params.begin()->first + "' for " + p_.base);
  }

 private:
  bool take(const std::string& key) {
    auto it = p_.params.find(key);
    if (it == p_.params.end()) return false;
    value_ = it->second;
    p_.params.erase(it);
    return true;
  }
  ParsedName p_;
  std::string value_;
};

}  // namespace

CatalogEntry catalog_entry(const std::string& name) {
  ParsedName parsed = parse_name(name);
  const std::string base = parsed.base;
  Params p(std::move(parsed));
  auto done = [&](CatalogEntry e) {
    p.finish();
    return e;
  };
  if (base == "pseudo_sphere") {
    const int n = p.whole("n", 2), r = p.whole("r", 0);
    const double c = p.real("c", 1.0);
    return done(pseudo_sphere(n, r, c, p.vec("a")));
  }
  if (base == "pseudo_hyperbolic") {
    const int n = p.whole("n", 2), r = p.whole("r", 0);
    const double c = p.real("c", -1.0);
    return done(pseudo_hyperbolic(n, r, c, p.vec("a")));
  }
  if (base == "plane") return done(plane());
  if (base == "cylinder") return done(cylinder(p.real("radius", 1.0)));
  if (base == "paraboloid") return done(paraboloid());
  if (base == "cubic_graph") return done(cubic_graph());
  if (base == "quartic_graph") return done(quartic_graph());
  if (base == "generic_graph") return done(generic_graph());
  if (base == "aniso_graph") return done(aniso_graph());
  if (base == "veronese") return done(veronese());
  if (base == "lorentz_cylinder") return done(lorentz_cylinder(p.real("radius", 2.0)));
  throw ConfigError("unknown geometry '" + name + "'");
}

std::vector<std::string> catalog_names() {
  return {"pseudo_sphere:n=2,r=0,c=1",
          "pseudo_sphere:n=2,r=1,c=1",
          "pseudo_hyperbolic:n=2,r=0,c=-1",
          "plane",
          "cylinder",
          "paraboloid",
          "cubic_graph",
          "quartic_graph",
          "generic_graph",
          "aniso_graph",
          "veronese",
          "lorentz_cylinder"};
}

CatalogCurve line_curve() {
  CatalogCurve c{"line", Curve::analytic(3, [](const Taylor& t) { return SeriesVector{t, 2.0 * t, -0.5 * t + 1.0}; },
                                         {-5.0, 5.0}, "line"),
                 MetricSignature(3, 0), 1, true, {}, {-2.0, 2.0}};
  return c;
}

CatalogCurve circle_curve(double radius) {
  return {"circle",
          Curve::analytic(2, [radius](const Taylor& t) { return SeriesVector{radius * cos(t), radius * sin(t)}; },
                          {-10.0, 10.0}, "circle"),
          MetricSignature(2, 0), 2, true, {1.0 / radius}, {0.0, 2.0 * kPi}};
}

CatalogCurve hyperbola_curve() {
  return {"hyperbola",
          Curve::analytic(2, [](const Taylor& t) { return SeriesVector{cosh(t), sinh(t)}; }, {-4.0, 4.0},
                          "hyperbola"),
          MetricSignature(2, 1), 2, true, {1.0}, {-2.0, 2.0}};
}

CatalogCurve helix_curve(double a, double b) {
  const double c = a * a + b * b;
  return {"helix",
          Curve::analytic(3, [a, b](const Taylor& t) { return SeriesVector{a * cos(t), a * sin(t), b * t}; },
                          {-10.0, 10.0}, "helix"),
          MetricSignature(3, 0), 3, true, {a / c, b / c}, {0.0, 2.0 * kPi}};
}

CatalogCurve lorentz_helix_curve(double a, double b) {
  if (!(a > b && b >= 0.0)) throw ConfigError("lorentz helix needs a > b >= 0");
  const double w = 1.0 / std::sqrt(a * a - b * b);
  const double c = a * a - b * b;
  return {"lorentz_helix",
          Curve::analytic(
              3, [a, b, w](const Taylor& s) { return SeriesVector{b * w * s, a * cos(w * s), a * sin(w * s)}; },
              {-20.0, 20.0}, "lorentz_helix"),
          MetricSignature(3, 1), 3, true, {a / c, b / c}, {0.0, 2.0 * kPi / w}};
}

CatalogCurve ellipse_curve(double a, double b) {
  return {"ellipse",
          Curve::analytic(2, [a, b](const Taylor& t) { return SeriesVector{a * cos(t), b * sin(t)}; }, {-10.0, 10.0},
                          "ellipse"),
          MetricSignature(2, 0), 2, false, {}, {0.0, 3.0}};
}

std::vector<CatalogCurve> catalog_curves() {
  return {line_curve(), circle_curve(), hyperbola_curve(), helix_curve(), lorentz_helix_curve(), ellipse_curve()};
}

SurfaceCurve latitude_circle() {
  const double th = kPi / 4;
  const double sc = 1.0 / std::sin(th);
  Curve c = Curve::analytic(
      2, [th, sc](const Taylor& s) { return SeriesVector{s * 0.0 + th, sc * s}; },
      {-(kPi - kMargin) / sc, (kPi - kMargin) / sc}, "latitude_circle");
  return {"latitude_circle", std::move(c), true, 1.0, std::sqrt(2.0)};
}

SurfaceCurve great_circle() {
  Curve c = Curve::analytic(
      2, [](const Taylor& s) { return SeriesVector{s * 0.0 + kPi / 2, s}; }, azimuth(), "great_circle");
  return {"great_circle", std::move(c), true, 0.0, 1.0};
}

SurfaceCurve latitude_spiral() {
  Curve c = Curve::analytic(
      2, [](const Taylor& t) { return SeriesVector{kPi / 4 + 0.3 * t, t}; }, {-2.0, 2.0}, "latitude_spiral");
  return {"latitude_spiral", std::move(c), false, std::nullopt, std::nullopt};
}

}  // namespace helixlab

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "helixlab/jets.hpp"

namespace helixlab {

struct KnownFacts {
  std::optional<double> mean_curvature_squared;  // <H,H> where constant
  std::optional<double> isotropy;                // L where constant
  std::optional<int> planarity_order;            // of every normal section
  bool totally_umbilical = false;
  bool parallel_mean_curvature = false;
  bool one_parallel = false;
  bool geodesic_sections = false;
  /// where the example comes from, for listings
  std::string origin;
};

struct CatalogEntry {
  std::string name;
  std::string description;
  ImmersionChart chart;
  KnownFacts facts;
  /// inner sampling box, well inside the chart domain
  Box sampling;
};

/// Random points of the entry's sampling box.
std::vector<Vector> sample_points(const CatalogEntry& entry, int count, std::uint64_t seed);

struct TangentSample {
  Vector u;
  Vector direction;  // unit tangent in coordinates
  int sign = 1;
};

/// Random (point, unit tangent) pairs. When the induced metric is indefinite
/// the causal type alternates, starting spacelike.
std::vector<TangentSample> tangent_samples(const CatalogEntry& entry, int count, std::uint64_t seed);

/// S^n_r(c) = {<p - a, p - a> = 1/c} in E^{n+1}_r, c > 0. Coordinates are
/// r free timelike coordinates followed by spherical angles.
CatalogEntry pseudo_sphere(int n, int r, double c, const Vector& center = {});
/// H^n_r(c) = {<p - a, p - a> = 1/c} in E^{n+1}_{r+1}, c < 0. Coordinates are
/// n - r free spacelike coordinates followed by spherical angles of the
/// timelike block (upper sheet when r = 0).
CatalogEntry pseudo_hyperbolic(int n, int r, double c, const Vector& center = {});
CatalogEntry plane();
CatalogEntry cylinder(double radius = 1.0);
CatalogEntry paraboloid();
/// Graphs (u, v, phi(u, v)) in E^3.
CatalogEntry cubic_graph();
CatalogEntry quartic_graph();
CatalogEntry generic_graph();
CatalogEntry aniso_graph();
/// Veronese surface: S^2(sqrt 3) in E^5.
CatalogEntry veronese();
/// Timelike circular cylinder (t, a cos th, a sin th) in E^3_1 carrying Lorentzian helices.
CatalogEntry lorentz_cylinder(double radius = 2.0);

/// Resolves names like "plane" or "pseudo_sphere:n=2,r=1,c=1,a=0;0;0.5".
/// Throws ConfigError for unknown names or invalid parameters.
CatalogEntry catalog_entry(const std::string& name);
/// Canonical names of every entry, with default parameters filled in.
std::vector<std::string> catalog_names();

struct CatalogCurve {
  std::string name;
  Curve curve;
  MetricSignature signature{1, 0};
  int rank = 0;
  bool w_curve = false;
  std::vector<double> curvatures;  // expected, when constant
  Interval sampling;
};

CatalogCurve line_curve();
CatalogCurve circle_curve(double radius = 1.0);
CatalogCurve hyperbola_curve();
CatalogCurve helix_curve(double a = 1.0, double b = 0.5);
/// (b w s, a cos w s, a sin w s) in E^3_1 with w = (a^2 - b^2)^(-1/2), a > b.
CatalogCurve lorentz_helix_curve(double a = 2.0, double b = 1.0);
CatalogCurve ellipse_curve(double a = 2.0, double b = 1.0);
std::vector<CatalogCurve> catalog_curves();

/// Curves in the coordinates of pseudo_sphere(2, 0, 1).
struct SurfaceCurve {
  std::string name;
  Curve parameter_curve;
  bool intrinsic_w_curve = false;
  std::optional<double> geodesic_curvature;
  std::optional<double> ambient_curvature;
};

/// Circle at latitude 45 degrees, unit speed on S^2(1).
SurfaceCurve latitude_circle();
/// Great circle through the equator.
SurfaceCurve great_circle();
/// Curve whose latitude drifts with the azimuth.
SurfaceCurve latitude_spiral();

}  // namespace helixlab

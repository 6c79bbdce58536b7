#pragma once

#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "helixlab/indefinite_linalg.hpp"
#include "helixlab/series.hpp"

namespace helixlab {

inline constexpr int kMaxCurveJetOrder = 5;
inline constexpr int kMaxImmersionJetOrder = 4;

struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();

  bool contains(double t, double margin = 0.0) const { return t - margin >= lo && t + margin <= hi; }
  double width() const { return hi - lo; }
};

struct CurveJet {
  double t = 0.0;
  Vector position;
  std::vector<Vector> derivatives;  // derivatives[k - 1] is the k-th derivative
  std::vector<double> accuracy;     // per derivative order, nondecreasing

  int order() const { return static_cast<int>(derivatives.size()); }
  const Vector& derivative(int k) const { return derivatives.at(static_cast<std::size_t>(k - 1)); }
  /// Univariate Taylor series in (t' - t) truncated at `order()`.
  SeriesVector series() const;
  static CurveJet from_series(double t, const SeriesVector& s, double accuracy = 0.0);
};

/// Step-size control for the finite-difference fallback.
struct DifferenceOptions {
  double step_scale = 1.0;
};

using CurveFunction = std::function<SeriesVector(const Taylor& t)>;
using CurveSampler = std::function<Vector(double t)>;
using CurveJetFunction = std::function<CurveJet(double t, int order)>;

/// A parametrized curve in R^m. Analytic curves are evaluated on Taylor
/// arguments and return exact derivatives; sampled curves fall back to
/// Richardson-extrapolated central differences.
class Curve {
 public:
  static Curve analytic(int dimension, CurveFunction f, Interval domain = {}, std::string name = {});
  static Curve sampled(int dimension, CurveSampler f, Interval domain = {}, std::string name = {},
                       DifferenceOptions options = {});
  static Curve from_jets(int dimension, CurveJetFunction jet, Interval domain, bool analytic,
                         std::string name = {});

  int dimension() const { return dimension_; }
  const Interval& domain() const { return domain_; }
  bool is_analytic() const { return analytic_; }
  const std::string& name() const { return name_; }

  Vector position(double t) const;
  CurveJet jet(double t, int order) const { return jet_(t, order); }

  /// The curve tau -> c(scale * tau + offset).
  Curve affine_reparametrized(double scale, double offset) const;

 private:
  Curve(int dimension, CurveJetFunction jet, Interval domain, bool analytic, std::string name);

  int dimension_;
  CurveJetFunction jet_;
  Interval domain_;
  bool analytic_;
  std::string name_;
};

/// Validated jet: derivatives 1..order at t. Throws EvaluationDomain when the
/// stencil does not fit inside the curve domain.
CurveJet curve_jet(const Curve& curve, double t, int order);

/// Derivative of order k (1..5) of a vector function at t by central
/// differences with Ridders-Richardson extrapolation. Returns the estimate and
/// writes the extrapolation error estimate.
Vector richardson_derivative(const CurveSampler& f, double t, int k, double initial_step,
                             double* error_estimate);

/// Largest admissible initial step for order k at t inside `domain`; throws
/// EvaluationDomain when even the smallest base step does not fit.
double difference_step(const Interval& domain, double t, int k, double step_scale);

struct Box {
  std::vector<Interval> ranges;

  int dimension() const { return static_cast<int>(ranges.size()); }
  bool contains(const Vector& u, double margin = 0.0) const;
  Vector center() const;
};

using ChartFunction = std::function<SeriesVector(std::span<const Taylor> u)>;
using ChartSampler = std::function<Vector(const Vector& u)>;

/// Parametrized immersion f: U in R^n -> E^m_s with expected induced index r.
class ImmersionChart {
 public:
  static ImmersionChart analytic(int n, MetricSignature ambient, int index, Box domain, ChartFunction f,
                                 std::string name = {});
  static ImmersionChart sampled(int n, MetricSignature ambient, int index, Box domain, ChartSampler f,
                                std::string name = {}, DifferenceOptions options = {});

  int parameter_dimension() const { return n_; }
  const MetricSignature& ambient() const { return ambient_; }
  int index() const { return index_; }
  const Box& domain() const { return domain_; }
  bool is_analytic() const { return static_cast<bool>(function_); }
  const std::string& name() const { return name_; }

  Vector position(const Vector& u) const;
  Matrix jacobian(const Vector& u) const;
  /// Taylor series of f about u in n variables; exact for analytic charts.
  /// `accuracy` receives the largest extrapolation error estimate of a partial.
  SeriesVector expand(const Vector& u, int degree, double* accuracy = nullptr) const;
  /// Evaluates the chart on Taylor arguments. Analytic charts only.
  SeriesVector evaluate(std::span<const Taylor> u) const;

  /// Throws ImmersionSingular when the Jacobian is rank deficient at u or the
  /// induced metric has the wrong index.
  void check_regular(const Vector& u) const;

 private:
  ImmersionChart() : ambient_(1, 0) {}

  int n_ = 0;
  MetricSignature ambient_;
  int index_ = 0;
  Box domain_;
  ChartFunction function_;
  ChartSampler sampler_;
  DifferenceOptions options_;
  std::string name_;
};

struct ImmersionJet {
  Vector u;
  int order = 0;
  SeriesVector series;  // Taylor expansion of f about u
  double accuracy = 0.0;

  /// Partial derivative d^alpha f at u.
  Vector partial(std::span<const int> alpha) const;
  Vector partial(std::initializer_list<int> alpha) const {
    return partial(std::span<const int>(alpha.begin(), alpha.size()));
  }
};

ImmersionJet immersion_jet(const ImmersionChart& chart, const Vector& u, int order);

/// Derivatives of s -> f(u + s X) at s = 0, as a curve jet.
CurveJet directional_jets(const ImmersionChart& chart, const Vector& u, const Vector& direction, int order);

/// The ambient curve t -> f(c(t)) for a parameter-space curve c.
Curve compose_chart_curve(const ImmersionChart& chart, const Curve& parameter_curve);

/// Local reparametrization of a curve germ by pseudo-arclength.
struct UnitSpeedSeries {
  SeriesVector curve;  // in the pseudo-arclength offset
  Taylor parameter;    // original parameter offset as a series in arclength offset
  double speed = 0.0;  // |<c',c'>|^(1/2) at the expansion point
  int sign = 1;        // causal sign of the tangent
};

/// Throws NullSegment when the tangent is null within tol_null.
UnitSpeedSeries unit_speed_series(const SeriesVector& curve, const MetricSignature& sig,
                                  double tol_null = kDefaultTolNull);

}  // namespace helixlab

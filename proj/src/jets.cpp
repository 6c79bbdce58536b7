#include "helixlab/jets.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <utility>

#include "helixlab/errors.hpp"

namespace helixlab {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

struct StencilPoint {
  int offset;
  double weight;
};

// Second-order central stencils for derivatives 0..5 (weights before h^-k).
const std::vector<StencilPoint>& stencil(int k) {
  static const std::array<std::vector<StencilPoint>, 6> table = {{
      {{0, 1.0}},
      {{-1, -0.5}, {1, 0.5}},
      {{-1, 1.0}, {0, -2.0}, {1, 1.0}},
      {{-2, -0.5}, {-1, 1.0}, {1, -1.0}, {2, 0.5}},
      {{-2, 1.0}, {-1, -4.0}, {0, 6.0}, {1, -4.0}, {2, 1.0}},
      {{-3, -0.5}, {-2, 2.0}, {-1, -2.5}, {1, 2.5}, {2, -2.0}, {3, 0.5}},
  }};
  if (k < 0 || k > 5) throw DimensionError("finite differences support orders 0..5");
  return table[static_cast<std::size_t>(k)];
}

int stencil_radius(int k) { return (k + 1) / 2; }

// Ridders' extrapolation of an O(h^2)-accurate estimate toward h -> 0.
Vector ridders(const std::function<Vector(double)>& estimate, double h0, double* error_out) {
  constexpr int kTable = 10;
  constexpr double kShrink = 1.4;
  constexpr double kShrink2 = kShrink * kShrink;
  constexpr double kSafe = 2.0;
  std::array<std::array<Vector, kTable>, kTable> a;
  double h = h0;
  a[0][0] = estimate(h);
  Vector best = a[0][0];
  double err = std::numeric_limits<double>::infinity();
  for (int i = 1; i < kTable; ++i) {
    h /= kShrink;
    a[0][i] = estimate(h);
    double fac = kShrink2;
    for (int j = 1; j <= i; ++j) {
      a[j][i] = (a[j - 1][i] * fac - a[j - 1][i - 1]) / (fac - 1.0);
      fac *= kShrink2;
      const double errt = std::max((a[j][i] - a[j - 1][i]).lpNorm<Eigen::Infinity>(),
                                   (a[j][i] - a[j - 1][i - 1]).lpNorm<Eigen::Infinity>());
      if (errt <= err) {
        err = errt;
        best = a[j][i];
      }
    }
    if ((a[i][i] - a[i - 1][i - 1]).lpNorm<Eigen::Infinity>() >= kSafe * err) break;
  }
  if (error_out) *error_out = err;
  return best;
}

// Preferred initial Ridders step per derivative order, relative to scale.
double preferred_step(int k) {
  static constexpr std::array<double, 6> steps = {0.0, 0.1, 0.15, 0.2, 0.25, 0.3};
  return steps[static_cast<std::size_t>(k)];
}

// Smallest initial step still accepted near a domain boundary: the classical
// truncation/cancellation balance eps^(1/(k+2)), widened by the Ridders
// shrink range.
double minimum_step(int k, double scale) { return 20.0 * std::pow(kEps, 1.0 / (k + 2)) * scale; }

}  // namespace

SeriesVector CurveJet::series() const {
  const int d = order();
  SeriesVector out;
  out.reserve(static_cast<std::size_t>(position.size()));
  for (Eigen::Index i = 0; i < position.size(); ++i) {
    Taylor s(1, d, position[i]);
    for (int k = 1; k <= d; ++k) s[static_cast<std::size_t>(k)] = derivative(k)[i] / factorial(k);
    out.push_back(std::move(s));
  }
  return out;
}

CurveJet CurveJet::from_series(double t, const SeriesVector& s, double accuracy) {
  CurveJet jet;
  jet.t = t;
  jet.position = values(s);
  const int d = common_degree(s);
  double running = 0.0;
  for (int k = 1; k <= d; ++k) {
    Vector v = derivative_at(s, k);
    running = std::max(running, accuracy * (1.0 + v.lpNorm<Eigen::Infinity>()) * factorial(k));
    jet.derivatives.push_back(std::move(v));
    jet.accuracy.push_back(running);
  }
  return jet;
}

Curve::Curve(int dimension, CurveJetFunction jet, Interval domain, bool analytic, std::string name)
    : dimension_(dimension), jet_(std::move(jet)), domain_(domain), analytic_(analytic), name_(std::move(name)) {}

Curve Curve::from_jets(int dimension, CurveJetFunction jet, Interval domain, bool analytic, std::string name) {
  return Curve(dimension, std::move(jet), domain, analytic, std::move(name));
}

Curve Curve::analytic(int dimension, CurveFunction f, Interval domain, std::string name) {
  auto jet = [dimension, f = std::move(f)](double t, int order) {
    const SeriesVector s = f(Taylor::variable(1, order, 0, t));
    if (static_cast<int>(s.size()) != dimension) throw DimensionError("curve returned wrong dimension");
    return CurveJet::from_series(t, s, 16.0 * kEps);
  };
  return Curve(dimension, std::move(jet), domain, true, std::move(name));
}

Curve Curve::sampled(int dimension, CurveSampler f, Interval domain, std::string name, DifferenceOptions options) {
  auto jet = [dimension, f = std::move(f), domain, options](double t, int order) {
    CurveJet out;
    out.t = t;
    out.position = f(t);
    if (out.position.size() != dimension) throw DimensionError("curve returned wrong dimension");
    double running = 0.0;
    for (int k = 1; k <= order; ++k) {
      const double h0 = difference_step(domain, t, k, options.step_scale);
      double err = 0.0;
      out.derivatives.push_back(richardson_derivative(f, t, k, h0, &err));
      running = std::max(running, err);
      out.accuracy.push_back(running);
    }
    return out;
  };
  return Curve(dimension, std::move(jet), domain, false, std::move(name));
}

Vector Curve::position(double t) const { return jet_(t, 0).position; }

Curve Curve::affine_reparametrized(double scale, double offset) const {
  if (scale == 0.0) throw DimensionError("affine reparametrization needs a nonzero scale");
  Interval d;
  d.lo = (domain_.lo - offset) / scale;
  d.hi = (domain_.hi - offset) / scale;
  if (d.lo > d.hi) std::swap(d.lo, d.hi);
  auto base = jet_;
  auto jet = [base, scale, offset](double tau, int order) {
    CurveJet j = base(scale * tau + offset, order);
    j.t = tau;
    double f = 1.0;
    for (int k = 1; k <= j.order(); ++k) {
      f *= scale;
      j.derivatives[static_cast<std::size_t>(k - 1)] *= f;
      j.accuracy[static_cast<std::size_t>(k - 1)] *= std::abs(f);
    }
    return j;
  };
  return Curve(dimension_, std::move(jet), d, analytic_, name_);
}

CurveJet curve_jet(const Curve& curve, double t, int order) {
  if (order < 0 || order > kMaxCurveJetOrder) {
    throw DimensionError("curve jets are available up to order " + std::to_string(kMaxCurveJetOrder));
  }
  if (!curve.domain().contains(t)) throw EvaluationDomain("parameter outside the curve domain");
  return curve.jet(t, order);
}

double difference_step(const Interval& domain, double t, int k, double step_scale) {
  const double scale = std::max(1.0, std::abs(t));
  const double radius = std::max(1, stencil_radius(k));
  double h = step_scale * preferred_step(k) * scale;
  const double room = std::min(t - domain.lo, domain.hi - t) / radius;
  h = std::min(h, room);
  if (!(h >= minimum_step(k, scale) * step_scale)) {
    throw EvaluationDomain("parameter too close to the domain boundary for a derivative of order " +
                           std::to_string(k));
  }
  return h;
}

Vector richardson_derivative(const CurveSampler& f, double t, int k, double initial_step, double* error_estimate) {
  const auto& st = stencil(k);
  auto estimate = [&](double h) {
    Vector acc;
    for (const auto& p : st) {
      Vector v = f(t + p.offset * h) * p.weight;
      if (acc.size() == 0) acc = std::move(v);
      else acc += v;
    }
    return Vector(acc / std::pow(h, k));
  };
  return ridders(estimate, initial_step, error_estimate);
}

bool Box::contains(const Vector& u, double margin) const {
  if (u.size() != dimension()) return false;
  for (int i = 0; i < dimension(); ++i) {
    if (!ranges[static_cast<std::size_t>(i)].contains(u[i], margin)) return false;
  }
  return true;
}

Vector Box::center() const {
  Vector c(dimension());
  for (int i = 0; i < dimension(); ++i) {
    const auto& r = ranges[static_cast<std::size_t>(i)];
    c[i] = std::isfinite(r.lo) && std::isfinite(r.hi) ? 0.5 * (r.lo + r.hi) : 0.0;
  }
  return c;
}

ImmersionChart ImmersionChart::analytic(int n, MetricSignature ambient, int index, Box domain, ChartFunction f,
                                        std::string name) {
  if (domain.dimension() != n) throw DimensionError("chart domain dimension differs from n");
  if (index < 0 || index > n) throw DimensionError("induced index outside [0, n]");
  ImmersionChart c;
  c.n_ = n;
  c.ambient_ = ambient;
  c.index_ = index;
  c.domain_ = std::move(domain);
  c.function_ = std::move(f);
  c.name_ = std::move(name);
  return c;
}

ImmersionChart ImmersionChart::sampled(int n, MetricSignature ambient, int index, Box domain, ChartSampler f,
                                       std::string name, DifferenceOptions options) {
  if (domain.dimension() != n) throw DimensionError("chart domain dimension differs from n");
  if (index < 0 || index > n) throw DimensionError("induced index outside [0, n]");
  ImmersionChart c;
  c.n_ = n;
  c.ambient_ = ambient;
  c.index_ = index;
  c.domain_ = std::move(domain);
  c.sampler_ = std::move(f);
  c.options_ = options;
  c.name_ = std::move(name);
  return c;
}

SeriesVector ImmersionChart::evaluate(std::span<const Taylor> u) const {
  if (!function_) throw DimensionError("chart '" + name_ + "' has no analytic evaluator");
  SeriesVector out = function_(u);
  if (static_cast<int>(out.size()) != ambient_.dimension()) {
    throw DimensionError("chart returned a point of the wrong dimension");
  }
  return out;
}

Vector ImmersionChart::position(const Vector& u) const {
  if (u.size() != n_) throw DimensionError("parameter point has wrong dimension");
  if (sampler_) return sampler_(u);
  std::vector<Taylor> args;
  for (int i = 0; i < n_; ++i) args.emplace_back(0, 0, u[i]);
  return values(evaluate(args));
}

SeriesVector ImmersionChart::expand(const Vector& u, int degree, double* accuracy) const {
  if (u.size() != n_) throw DimensionError("parameter point has wrong dimension");
  if (accuracy) *accuracy = function_ ? 16.0 * kEps : 0.0;
  if (function_) {
    std::vector<Taylor> args;
    args.reserve(static_cast<std::size_t>(n_));
    for (int i = 0; i < n_; ++i) args.push_back(Taylor::variable(n_, degree, i, u[i]));
    return evaluate(args);
  }
  // Tensor-product central differences per multi-index, Ridders-extrapolated.
  const int m = ambient_.dimension();
  SeriesVector out;
  for (int i = 0; i < m; ++i) out.emplace_back(n_, degree, 0.0);
  const auto& basis = out[0].basis();
  const double scale = std::max(1.0, u.lpNorm<Eigen::Infinity>());
  for (std::size_t idx = 0; idx < basis.size(); ++idx) {
    const auto& alpha = basis.exponents(idx);
    const int total = basis.total_degree(idx);
    Vector value;
    if (total == 0) {
      value = sampler_(u);
    } else {
      int radius = 0;
      for (int a : alpha) radius = std::max(radius, stencil_radius(a));
      double room = std::numeric_limits<double>::infinity();
      for (int v = 0; v < n_; ++v) {
        const auto& r = domain_.ranges[static_cast<std::size_t>(v)];
        room = std::min(room, std::min(u[v] - r.lo, r.hi - u[v]));
      }
      double h = std::min(options_.step_scale * preferred_step(std::min(total, 5)) * scale, room / radius);
      if (!(h >= minimum_step(total, scale) * options_.step_scale)) {
        throw EvaluationDomain("parameter point too close to the chart boundary");
      }
      auto estimate = [&](double step) {
        Vector acc = Vector::Zero(m);
        std::vector<std::size_t> cursor(static_cast<std::size_t>(n_), 0);
        while (true) {
          Vector point = u;
          double w = 1.0;
          for (int v = 0; v < n_; ++v) {
            const auto& p = stencil(alpha[static_cast<std::size_t>(v)])[cursor[static_cast<std::size_t>(v)]];
            point[v] += p.offset * step;
            w *= p.weight;
          }
          acc += w * sampler_(point);
          int v = 0;
          for (; v < n_; ++v) {
            auto& c = cursor[static_cast<std::size_t>(v)];
            if (++c < stencil(alpha[static_cast<std::size_t>(v)]).size()) break;
            c = 0;
          }
          if (v == n_) break;
        }
        return Vector(acc / std::pow(step, total));
      };
      double err = 0.0;
      value = ridders(estimate, h, &err);
      if (accuracy) *accuracy = std::max(*accuracy, err);
    }
    double fact = 1.0;
    for (int a : alpha) fact *= factorial(a);
    for (int i = 0; i < m; ++i) out[static_cast<std::size_t>(i)][idx] = value[i] / fact;
  }
  return out;
}

Matrix ImmersionChart::jacobian(const Vector& u) const {
  const SeriesVector s = expand(u, 1);
  Matrix j(ambient_.dimension(), n_);
  for (int i = 0; i < ambient_.dimension(); ++i)
    for (int k = 0; k < n_; ++k) j(i, k) = s[static_cast<std::size_t>(i)][static_cast<std::size_t>(k + 1)];
  return j;
}

void ImmersionChart::check_regular(const Vector& u) const {
  const Matrix j = jacobian(u);
  std::vector<Vector> cols;
  for (int k = 0; k < n_; ++k) cols.emplace_back(j.col(k));
  if (dependence_order(cols) < n_) throw ImmersionSingular("Jacobian is rank deficient");
  const Matrix g = j.transpose() * ambient_.gram() * j;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(g);
  const double scale = eig.eigenvalues().cwiseAbs().maxCoeff();
  int negative = 0;
  for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i) {
    const double lambda = eig.eigenvalues()[i];
    if (std::abs(lambda) <= kDefaultTolNull * scale) throw ImmersionSingular("induced metric is degenerate");
    if (lambda < 0) ++negative;
  }
  if (negative != index_) {
    throw ImmersionSingular("induced metric has index " + std::to_string(negative) + ", expected " +
                            std::to_string(index_));
  }
}

Vector ImmersionJet::partial(std::span<const int> alpha) const {
  Vector out(static_cast<Eigen::Index>(series.size()));
  for (std::size_t i = 0; i < series.size(); ++i) out[static_cast<Eigen::Index>(i)] = series[i].partial(alpha);
  return out;
}

ImmersionJet immersion_jet(const ImmersionChart& chart, const Vector& u, int order) {
  if (order < 0 || order > kMaxImmersionJetOrder) {
    throw DimensionError("immersion jets are available up to order " + std::to_string(kMaxImmersionJetOrder));
  }
  if (!chart.domain().contains(u)) throw EvaluationDomain("parameter point outside the chart domain");
  if (order >= 1) chart.check_regular(u);
  ImmersionJet jet;
  jet.u = u;
  jet.order = order;
  jet.series = chart.expand(u, order, &jet.accuracy);
  return jet;
}

CurveJet directional_jets(const ImmersionChart& chart, const Vector& u, const Vector& direction, int order) {
  if (direction.size() != chart.parameter_dimension()) throw DimensionError("direction has wrong dimension");
  if (!chart.domain().contains(u)) throw EvaluationDomain("parameter point outside the chart domain");
  if (chart.is_analytic()) {
    std::vector<Taylor> args;
    for (int i = 0; i < chart.parameter_dimension(); ++i) {
      args.push_back(Taylor::variable(1, order, 0, 0.0) * direction[i] + u[i]);
    }
    return CurveJet::from_series(0.0, chart.evaluate(args), 16.0 * kEps);
  }
  // largest s-interval along the line that stays in the box
  Interval line;
  line.lo = -std::numeric_limits<double>::infinity();
  line.hi = std::numeric_limits<double>::infinity();
  for (int i = 0; i < chart.parameter_dimension(); ++i) {
    if (direction[i] == 0.0) continue;
    const auto& r = chart.domain().ranges[static_cast<std::size_t>(i)];
    double a = (r.lo - u[i]) / direction[i], b = (r.hi - u[i]) / direction[i];
    if (a > b) std::swap(a, b);
    line.lo = std::max(line.lo, a);
    line.hi = std::min(line.hi, b);
  }
  const Curve c = Curve::sampled(
      chart.ambient().dimension(), [&chart, u, direction](double s) { return chart.position(u + s * direction); },
      line);
  return c.jet(0.0, order);
}

Curve compose_chart_curve(const ImmersionChart& chart, const Curve& parameter_curve) {
  if (parameter_curve.dimension() != chart.parameter_dimension()) {
    throw DimensionError("parameter curve dimension differs from the chart's");
  }
  const int m = chart.ambient().dimension();
  if (chart.is_analytic() && parameter_curve.is_analytic()) {
    auto jet = [chart, parameter_curve](double t, int order) {
      const CurveJet cj = parameter_curve.jet(t, order);
      const SeriesVector deltas = cj.series();
      const SeriesVector f = chart.expand(cj.position, order);
      return CurveJet::from_series(t, compose(f, deltas), 16.0 * kEps);
    };
    return Curve::from_jets(m, jet, parameter_curve.domain(), true, parameter_curve.name());
  }
  return Curve::sampled(
      m, [chart, parameter_curve](double t) { return chart.position(parameter_curve.position(t)); },
      parameter_curve.domain(), parameter_curve.name());
}

UnitSpeedSeries unit_speed_series(const SeriesVector& curve, const MetricSignature& sig, double tol_null) {
  const int d = common_degree(curve);
  if (d < 1) throw DimensionError("unit-speed reparametrization needs at least a first derivative");
  const SeriesVector velocity = derivative(curve, 0);
  const Vector v0 = values(velocity);
  const auto cc = causal_character(v0, sig, tol_null);
  if (cc.kind == Causal::null) throw NullSegment("tangent vector is null");
  UnitSpeedSeries out;
  out.sign = cc.value > 0 ? 1 : -1;
  const Taylor speed = sqrt(inner(sig, velocity, velocity) * static_cast<double>(out.sign));
  out.speed = speed.value();
  const Taylor arclength = speed.integral();
  out.parameter = reversion(arclength);
  const Taylor delta[1] = {out.parameter};
  out.curve = compose(truncated(curve, d), delta);
  return out;
}

}  // namespace helixlab

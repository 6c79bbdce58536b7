#include "helixlab/curve_engine.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <memory>
#include <string>

#include <boost/numeric/odeint.hpp>

#include "helixlab/errors.hpp"

namespace helixlab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

SeriesVector plain_derivative(const SeriesVector& v) { return derivative(v, 0); }

}  // namespace

FrenetApparatus frenet_from_series(const SeriesVector& curve, const MetricSignature& sig,
                                   const FrenetOptions& options, const AlongCurveDerivative& along) {
  const AlongCurveDerivative op = along ? along : AlongCurveDerivative(plain_derivative);
  const int degree = common_degree(curve);
  if (degree < 2) throw DimensionError("Frenet apparatus needs at least a second-order jet");
  const int max_order = std::min({options.max_order, degree - 1, sig.dimension()});

  FrenetApparatus app;
  app.curve_derivatives.push_back(values(curve));
  for (int k = 1; k <= degree; ++k) app.curve_derivatives.push_back(derivative_at(curve, k));

  std::vector<SeriesVector> frame;   // V_i as series
  std::vector<Vector> generators;    // D_j(0)
  std::vector<double> norms;         // n_j
  int orientation = 1;

  SeriesVector d = derivative(curve, 0);
  {
    const auto cc = causal_character(values(d), sig, options.tol_null);
    if (cc.kind == Causal::null) throw NullIntermediate("tangent vector is null");
    app.signs.push_back(cc.value > 0 ? 1 : -1);
    const Taylor n = sqrt(inner(sig, d, d) * static_cast<double>(app.signs.back()));
    norms.push_back(n.value());
    frame.push_back((1.0 / n) * d);
    generators.push_back(values(d));
  }
  int order = 1;
  for (int j = 2; j <= max_order + 1; ++j) {
    d = op(d);
    generators.push_back(values(d));
    const bool independent = dependence_order(generators, options.tol_rank) == j;
    SeriesVector w = d;
    if (independent) {
      for (int i = 0; i < j - 1; ++i) {
        const auto si = static_cast<std::size_t>(i);
        w -= (inner(sig, d, frame[si]) * static_cast<double>(app.signs[si])) * frame[si];
      }
    }
    const Vector w0 = values(w);
    const double euclidean_ratio = w0.norm() / norms.back();
    if (!independent || euclidean_ratio <= options.tol_curvature) {
      if (independent && euclidean_ratio >= 0.1 * options.tol_curvature) {
        throw OrderAmbiguous("curvature k_" + std::to_string(j - 1) + " = " + std::to_string(euclidean_ratio) +
                             " sits at the detection threshold");
      }
      break;
    }
    if (j == max_order + 1) {
      // every generator up to max_order + 1 is independent
      app.order_truncated = true;
      break;
    }
    const auto cc = causal_character(w0, sig, options.tol_null);
    if (cc.kind == Causal::null) {
      throw NullIntermediate("Frenet construction reached a null vector at order " + std::to_string(j));
    }
    const int eps = cc.value > 0 ? 1 : -1;
    const Taylor n = sqrt(inner(sig, w, w) * static_cast<double>(eps));
    if (n.value() / norms.back() <= options.tol_curvature) {
      throw NullIntermediate("orthogonal component at order " + std::to_string(j) + " is nearly null");
    }
    orientation *= eps;
    app.signs.push_back(eps);
    norms.push_back(n.value());
    frame.push_back(static_cast<double>(orientation) * ((1.0 / n) * w));
    order = j;
  }
  if (app.order_truncated) order = max_order;

  app.order = order;
  std::vector<SeriesVector> frame_derivative;
  for (int i = 0; i < order; ++i) {
    const auto si = static_cast<std::size_t>(i);
    frame_derivative.push_back(op(frame[si]));
    app.frame.push_back(values(frame[si]));
    app.frame_derivatives.push_back(values(frame_derivative.back()));
  }
  for (int i = 0; i + 1 < order; ++i) {
    const auto si = static_cast<std::size_t>(i);
    const Taylor k = inner(sig, frame_derivative[si], frame[si + 1]);
    app.curvatures.push_back(k.value());
    app.curvature_rates.push_back(k.degree() >= 1 ? k.derivative_at(1) : kNaN);
  }
  return app;
}

FrenetApparatus frenet_apparatus(const Curve& curve, double t, const MetricSignature& sig,
                                 const FrenetOptions& options) {
  if (curve.dimension() != sig.dimension()) throw DimensionError("curve and signature dimensions differ");
  const int order = std::min(options.max_order + 1, kMaxCurveJetOrder);
  const CurveJet jet = curve_jet(curve, t, order);
  const UnitSpeedSeries local = unit_speed_series(jet.series(), sig, options.tol_null);
  FrenetApparatus app = frenet_from_series(local.curve, sig, options);
  app.s = t;
  return app;
}

std::vector<double> frenet_residuals(const FrenetApparatus& app) {
  std::vector<double> out;
  const int d = app.order;
  for (int i = 0; i < d; ++i) {
    const auto si = static_cast<std::size_t>(i);
    Vector expected = Vector::Zero(app.frame[si].size());
    if (i > 0) expected -= app.signs[si - 1] * app.curvatures[si - 1] * app.frame[si - 1];
    if (i + 1 < d) expected += app.signs[si + 1] * app.curvatures[si] * app.frame[si + 1];
    out.push_back((app.frame_derivatives[si] - expected).norm());
  }
  return out;
}

WCurveVerdict summarize_w_curve(std::span<const FrenetApparatus> samples, double tol_const) {
  WCurveVerdict v;
  if (samples.empty()) throw DimensionError("W-curve classification needs at least one sample");
  v.samples = static_cast<int>(samples.size());
  v.rank = samples.front().order;
  for (const auto& a : samples) {
    if (a.order != v.rank) {
      throw InconsistentOrder("osculating order varies between " + std::to_string(v.rank) + " and " +
                              std::to_string(a.order));
    }
  }
  v.is_w_curve = true;
  for (int i = 0; i + 1 < v.rank; ++i) {
    double sum = 0.0;
    for (const auto& a : samples) sum += a.curvatures[static_cast<std::size_t>(i)];
    const double mean = sum / static_cast<double>(samples.size());
    double dev = 0.0;
    for (const auto& a : samples) dev = std::max(dev, std::abs(a.curvatures[static_cast<std::size_t>(i)] - mean));
    v.curvature_means.push_back(mean);
    v.curvature_deviations.push_back(dev);
    if (dev > tol_const * (1.0 + std::abs(mean))) v.is_w_curve = false;
  }
  for (const auto& a : samples) {
    for (double r : frenet_residuals(a)) v.frenet_residual = std::max(v.frenet_residual, r);
  }
  v.identity_residual = kNaN;
  return v;
}

WCurveVerdict classify_w_curve(const Curve& curve, const MetricSignature& sig, int samples, Interval span,
                               double tol_const, const FrenetOptions& options) {
  if (samples < 1) throw DimensionError("need at least one sample");
  std::vector<FrenetApparatus> apps;
  apps.reserve(static_cast<std::size_t>(samples));
  for (int i = 0; i < samples; ++i) {
    const double t = samples == 1 ? 0.5 * (span.lo + span.hi)
                                  : span.lo + span.width() * static_cast<double>(i) / (samples - 1);
    apps.push_back(frenet_apparatus(curve, t, sig, options));
  }
  WCurveVerdict v = summarize_w_curve(apps, tol_const);
  if (v.rank == 2 || v.rank == 3) {
    v.identity_residual = 0.0;
    for (const auto& a : apps) {
      const auto& g = a.curve_derivatives;
      const double e1 = a.signs[0], e2 = a.signs[1];
      const double k1 = a.curvatures[0];
      double r = 0.0;
      if (v.rank == 2) {
        r = (g[3] + e1 * e2 * k1 * k1 * g[1]).norm();
      } else if (g.size() > 4) {
        const double e3 = a.signs[2], k2 = a.curvatures[1];
        r = (g[4] + e2 * (e1 * k1 * k1 + e3 * k2 * k2) * g[2]).norm();
      } else {
        r = kNaN;
      }
      v.identity_residual = std::max(v.identity_residual, r);
    }
  }
  return v;
}

namespace {

using State = std::array<double, 1>;

class ArclengthMap {
 public:
  ArclengthMap(Curve curve, double t0, double span, MetricSignature sig, double tol_null)
      : curve_(std::move(curve)), sig_(sig), tol_null_(tol_null), t0_(t0) {
    namespace ode = boost::numeric::odeint;
    constexpr int kNodes = 65;
    std::vector<double> times;
    for (int i = 0; i < kNodes; ++i) times.push_back(t0 + span * i / (kNodes - 1));
    State s{0.0};
    auto rhs = [this](const State&, State& dsdt, double t) { dsdt[0] = speed(t); };
    auto stepper = ode::make_dense_output(kTol, kTol, ode::runge_kutta_dopri5<State>());
    ode::integrate_times(stepper, rhs, s, times.begin(), times.end(), span / 256.0,
                         [this](const State& x, double t) {
                           t_nodes_.push_back(t);
                           s_nodes_.push_back(x[0]);
                         });
  }

  double length() const { return s_nodes_.back(); }

  double speed(double t) const {
    const CurveJet j = curve_.jet(t, 1);
    const auto cc = causal_character(j.derivative(1), sig_, tol_null_);
    if (cc.kind == Causal::null) {
      throw NullSegment("curve tangent is null at t = " + std::to_string(t));
    }
    return std::sqrt(std::abs(cc.value));
  }

  double parameter_at(double s) const {
    namespace ode = boost::numeric::odeint;
    auto it = std::upper_bound(s_nodes_.begin(), s_nodes_.end(), s);
    std::size_t k = it == s_nodes_.begin() ? 0 : static_cast<std::size_t>(it - s_nodes_.begin()) - 1;
    k = std::min(k, s_nodes_.size() - 1);
    State t{t_nodes_[k]};
    const double s0 = s_nodes_[k];
    if (s == s0) return t[0];
    auto rhs = [this](const State& x, State& dtds, double) { dtds[0] = 1.0 / speed(x[0]); };
    ode::integrate_adaptive(ode::make_controlled(kTol, kTol, ode::runge_kutta_dopri5<State>()), rhs, t, s0, s,
                            (s - s0) / 8.0);
    return t[0];
  }

  CurveJet jet(double s, int order) const {
    const double t = parameter_at(s);
    const CurveJet base = curve_.jet(t, order);
    const UnitSpeedSeries local = unit_speed_series(base.series(), sig_, tol_null_);
    const double acc = base.accuracy.empty() ? 0.0 : base.accuracy.back();
    return CurveJet::from_series(s, local.curve, acc);
  }

 private:
  static constexpr double kTol = 1e-13;
  Curve curve_;
  MetricSignature sig_;
  double tol_null_;
  double t0_;
  std::vector<double> t_nodes_;
  std::vector<double> s_nodes_;
};

}  // namespace

Curve arclength_reparametrize(const Curve& curve, double t0, double span, const MetricSignature& sig,
                              double tol_null) {
  if (!(span > 0.0)) throw DimensionError("arclength span must be positive");
  if (curve.dimension() != sig.dimension()) throw DimensionError("curve and signature dimensions differ");
  if (!curve.domain().contains(t0) || !curve.domain().contains(t0 + span)) {
    throw EvaluationDomain("arclength span leaves the curve domain");
  }
  auto map = std::make_shared<const ArclengthMap>(curve, t0, span, sig, tol_null);
  const Interval domain{0.0, map->length()};
  return Curve::from_jets(
      curve.dimension(), [map](double s, int order) { return map->jet(s, order); }, domain, curve.is_analytic(),
      curve.name());
}

}  // namespace helixlab

#pragma once

#include <functional>
#include <span>
#include <vector>

#include "helixlab/jets.hpp"

namespace helixlab {

struct FrenetOptions {
  int max_order = 4;
  double tol_curvature = 1e-6;
  double tol_rank = kDefaultTolRank;
  double tol_null = kDefaultTolNull;
};

/// Frenet frame V_1..V_d of a non-null curve at one parameter value, with
/// V_1' = e2 k1 V2, V_i' = -e_{i-1} k_{i-1} V_{i-1} + e_{i+1} k_i V_{i+1}.
/// Curvatures are positive; the orientation of each V_{i+1} absorbs the sign.
struct FrenetApparatus {
  double s = 0.0;
  int order = 0;
  std::vector<Vector> frame;
  std::vector<Vector> frame_derivatives;
  std::vector<int> signs;
  std::vector<double> curvatures;
  /// dk_i/ds, NaN when the jet is too short to resolve it.
  std::vector<double> curvature_rates;
  /// True when every derivative up to max_order was independent, so the true
  /// osculating order may be larger.
  bool order_truncated = false;
  /// Derivatives of the unit-speed curve at s: entries 1..K (entry 0 unused).
  std::vector<Vector> curve_derivatives;
};

/// Covariant derivative along the curve acting on vector series in the
/// arclength offset. The plain derivative gives the ambient apparatus; a
/// tangential projection composed with it gives the intrinsic one.
using AlongCurveDerivative = std::function<SeriesVector(const SeriesVector&)>;

/// Frenet apparatus from the Taylor germ of a unit-speed curve. The frame is
/// built as series so that its derivative is exact.
FrenetApparatus frenet_from_series(const SeriesVector& unit_speed_curve, const MetricSignature& sig,
                                   const FrenetOptions& options = {},
                                   const AlongCurveDerivative& along = {});

/// Apparatus of `curve` at parameter t. The germ is reparametrized by
/// pseudo-arclength locally, so unit speed is not required of the input.
FrenetApparatus frenet_apparatus(const Curve& curve, double t, const MetricSignature& sig,
                                 const FrenetOptions& options = {});

/// Euclidean norms of V_i' - (-e_{i-1} k_{i-1} V_{i-1} + e_{i+1} k_i V_{i+1}),
/// with k_0 = k_d = 0.
std::vector<double> frenet_residuals(const FrenetApparatus& apparatus);

struct WCurveVerdict {
  bool is_w_curve = false;
  int rank = 0;
  int samples = 0;
  std::vector<double> curvature_means;
  std::vector<double> curvature_deviations;
  /// rank 2: max |g''' + e1 e2 k1^2 g'|; rank 3: max |g'''' + e2 (e1 k1^2 + e3 k2^2) g''|;
  /// NaN otherwise.
  double identity_residual = 0.0;
  double frenet_residual = 0.0;
};

/// Constancy statistics over precomputed apparatus samples. Throws
/// InconsistentOrder when the osculating order varies.
WCurveVerdict summarize_w_curve(std::span<const FrenetApparatus> samples, double tol_const);

WCurveVerdict classify_w_curve(const Curve& curve, const MetricSignature& sig, int samples, Interval span,
                               double tol_const = 1e-5, const FrenetOptions& options = {});

/// Unit-speed reparametrization s -> c(t(s)) over [t0, t0 + span], with s
/// measured from t0. t(s) is integrated with an adaptive Dormand-Prince
/// scheme; jets at each s are exact reparametrizations of the local germ.
Curve arclength_reparametrize(const Curve& curve, double t0, double span, const MetricSignature& sig,
                              double tol_null = kDefaultTolNull);

}  // namespace helixlab

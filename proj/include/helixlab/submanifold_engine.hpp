#pragma once

#include <functional>
#include <span>
#include <vector>

#include "helixlab/jets.hpp"

namespace helixlab {

/// Coordinate tensors of a chart as Taylor series about a parameter point u.
/// With a chart expansion of degree D, g has degree D-1, Gamma and h degree
/// D-2, nabla h degree D-3 and nabla nabla h degree D-4.
class ExtrinsicFields {
 public:
  ExtrinsicFields(const ImmersionChart& chart, const Vector& u, int degree = 4);
  /// Fields of the immersion whose expansion about the origin of its n
  /// variables is `f`.
  ExtrinsicFields(const MetricSignature& ambient, SeriesVector f);

  int parameter_dimension() const { return n_; }
  int degree() const { return degree_; }
  const MetricSignature& ambient() const { return ambient_; }
  const SeriesVector& immersion() const { return f_; }

  const SeriesVector& partial(int i) const { return df_[idx(i)]; }
  const Taylor& metric(int i, int j) const { return g_(i, j); }
  const Taylor& inverse_metric(int i, int j) const { return ginv_(i, j); }
  const Taylor& christoffel(int k, int i, int j) const { return gamma_[idx(k, i, j)]; }
  const SeriesVector& h(int i, int j) const { return h_[idx(i, j)]; }
  const SeriesVector& nabla_h(int k, int i, int j) const;
  const SeriesVector& nabla2_h(int w, int k, int i, int j) const;

  /// Normal projection v - f_k g^{kl} <f_l, v>.
  SeriesVector normal_part(const SeriesVector& v) const;
  /// Coordinates c^k = g^{kl} <f_l, v> of the tangential part.
  std::vector<Taylor> tangent_coordinates(const SeriesVector& v) const;
  SeriesVector tangent_vector(std::span<const Taylor> coords) const;

  /// Mean curvature (1/n) g^{ij} h_ij.
  SeriesVector mean_curvature() const;

  // Contractions at the expansion point; X, Y, Z, W are coordinate vectors.
  Vector h_at(const Vector& X, const Vector& Y) const;
  Vector nabla_h_at(const Vector& X, const Vector& Y, const Vector& Z) const;
  Vector nabla2_h_at(const Vector& W, const Vector& X, const Vector& Y, const Vector& Z) const;
  /// Gamma(X, Y)^k at the expansion point.
  Vector christoffel_at(const Vector& X, const Vector& Y) const;
  Matrix metric_at() const;
  Matrix basis_at() const;

 private:
  void build();
  std::size_t idx(int i) const { return static_cast<std::size_t>(i); }
  std::size_t idx(int i, int j) const { return static_cast<std::size_t>(i * n_ + j); }
  std::size_t idx(int i, int j, int k) const { return static_cast<std::size_t>((i * n_ + j) * n_ + k); }
  std::size_t idx(int i, int j, int k, int l) const {
    return static_cast<std::size_t>(((i * n_ + j) * n_ + k) * n_ + l);
  }

  MetricSignature ambient_;
  SeriesVector f_;
  int n_ = 0;
  int degree_ = 0;
  std::vector<SeriesVector> df_;
  SeriesMatrix g_;
  SeriesMatrix ginv_;
  std::vector<Taylor> gamma_;
  std::vector<SeriesVector> h_;
  std::vector<SeriesVector> nabla_h_;
  std::vector<SeriesVector> nabla2_h_;
};

struct ExtrinsicState {
  Vector u;
  Vector point;
  MetricSignature ambient{1, 0};
  Matrix basis;  // columns d_i f
  Matrix metric;
  /// christoffel[k](i, j) = Gamma^k_ij
  std::vector<Matrix> christoffel;
  /// h_coord[i * n + j] = h(d_i, d_j)
  std::vector<Vector> h_coord;
  std::vector<Vector> tangent_frame;
  std::vector<int> tangent_signs;
  /// column a holds the coordinates of tangent_frame[a]
  Matrix frame_coordinates;
  std::vector<Vector> normal_frame;
  std::vector<int> normal_signs;
  /// h_frame[a * n + b] = h(e_a, e_b)
  std::vector<Vector> h_frame;
  Vector mean_curvature;

  int dimension() const { return static_cast<int>(basis.cols()); }
  Vector h(const Vector& X, const Vector& Y) const;
  Vector tangent(const Vector& coords) const { return basis * coords; }
  /// Coordinates of an ambient tangent vector.
  Vector coordinates(const Vector& tangent_vector) const;
  /// Tangential component of an ambient vector, as an ambient vector.
  Vector tangential_part(const Vector& v) const;
};

/// Throws ImmersionSingular, or NullIntermediate when the tangent or normal
/// frame cannot be completed.
ExtrinsicState extrinsic_state(const ImmersionChart& chart, const Vector& u);
ExtrinsicState extrinsic_state(const ExtrinsicFields& fields, const Vector& u);

/// Mean curvature (1/n) sum <e_i,e_i> h(e_i,e_i) over a pseudo-orthonormal frame.
Vector mean_curvature(const ExtrinsicState& state);
Vector mean_curvature(const ExtrinsicState& state, std::span<const Vector> frame_coordinates);

/// Matrix M of A_xi in coordinates: A_xi(d_j) = sum_i M(i, j) d_i.
/// Throws NotNormal when xi has a tangential component above tol.
Matrix shape_operator(const ExtrinsicState& state, const Vector& xi, double tol = 1e-8);

using NormalField = std::function<Vector(const Vector& u)>;
using NormalSeriesField = std::function<SeriesVector(std::span<const Taylor> u)>;

struct NormalDerivative {
  Vector normal;      // D_X xi
  Vector tangential;  // tangential part, equal to -A_xi X
  double shape_residual = 0.0;
};

/// D_X xi along the geodesic through u with initial velocity X. The field
/// must be normal at u.
NormalDerivative normal_connection_derivative(const ImmersionChart& chart, const Vector& u, const Vector& X,
                                              const NormalField& xi, double tol = 1e-8);
NormalDerivative normal_connection_derivative(const ImmersionChart& chart, const Vector& u, const Vector& X,
                                              const NormalSeriesField& xi, double tol = 1e-8);

Vector nabla_h(const ImmersionChart& chart, const Vector& u, const Vector& X, const Vector& Y, const Vector& Z);
Vector nabla2_h(const ImmersionChart& chart, const Vector& u, const Vector& W, const Vector& X, const Vector& Y,
                const Vector& Z);

struct PointCheck {
  bool holds = false;
  double residual = 0.0;
  int evaluated = 0;
  /// sample points skipped because the tangent frame was degenerate
  std::vector<Vector> skipped;
};

PointCheck is_totally_umbilical(const ImmersionChart& chart, std::span<const Vector> points, double tol = 1e-8);
/// Max Euclidean norm of D_X H over points and coordinate directions.
PointCheck is_parallel_mean_curvature(const ImmersionChart& chart, std::span<const Vector> points,
                                      std::span<const Vector> directions, double tol = 1e-7);

/// Max residuals over coordinate directions at one point: duality
/// <A_xi X, Y> - <h(X,Y), xi> over a normal frame, tangential part of h,
/// Codazzi asymmetry of nabla h, and h(X,Y) - g(X,Y) H.
struct StructuralResiduals {
  double duality = 0.0;
  double normality = 0.0;
  double codazzi = 0.0;
  double umbilicity = 0.0;
};
StructuralResiduals structural_residuals(const ImmersionChart& chart, const Vector& u);

struct GeodesicPath {
  std::vector<double> s;
  std::vector<Vector> u;
  std::vector<Vector> velocity;
  std::vector<Vector> points;
  int sign = 1;
  /// max |<gamma',gamma'> - <gamma'(0),gamma'(0)>| over the samples
  double max_speed_drift = 0.0;
};

/// Solves u'' + Gamma(u)(u', u') = 0 over [0, span] with an adaptive
/// Dormand-Prince scheme, sampling `samples + 1` equally spaced points.
/// Throws LeftDomain when the trajectory leaves the chart box.
GeodesicPath integrate_geodesic(const ImmersionChart& chart, const Vector& u0, const Vector& X0, double span,
                                int samples = 64, double tol = 1e-12);

/// Taylor germ of the geodesic with u(0) = u, u'(0) = X, to the given order.
/// Returns the parameter germ (n series) and the ambient germ (m series).
struct GeodesicGerm {
  SeriesVector parameter;
  SeriesVector ambient;
};
GeodesicGerm geodesic_germ(const ImmersionChart& chart, const Vector& u, const Vector& X, int order);

struct UnitTangent {
  Vector coords;
  Vector vector;
  int sign = 1;
};

/// Deterministic sweep of unit tangents at the state's point. Covers both
/// causal characters when the induced metric is indefinite; null directions
/// never occur.
std::vector<UnitTangent> unit_tangent_sweep(const ExtrinsicState& state, int count);

/// Unit tangent orthogonal to X with the largest |<Y,Y>| candidate.
UnitTangent orthogonal_unit_tangent(const ExtrinsicState& state, const UnitTangent& X);

struct IsotropyProfile {
  std::vector<double> point_spread;
  std::vector<double> point_mean;
  double global_spread = 0.0;
  double min_value = 0.0;
  double max_value = 0.0;
  double cross_residual = 0.0;
  int evaluated_points = 0;
  std::vector<Vector> skipped;
};

/// L = <h(X,X), h(X,X)> over `directions` unit tangents per point.
IsotropyProfile pseudo_isotropy_profile(const ImmersionChart& chart, std::span<const Vector> points,
                                        int directions);

}  // namespace helixlab

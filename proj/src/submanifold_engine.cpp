#include "helixlab/submanifold_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <Eigen/Dense>
#include <boost/numeric/odeint.hpp>

#include "helixlab/errors.hpp"

namespace helixlab {

ExtrinsicFields::ExtrinsicFields(const ImmersionChart& chart, const Vector& u, int degree)
    : ambient_(chart.ambient()) {
  if (degree < 2) throw DimensionError("extrinsic fields need a chart expansion of degree at least 2");
  if (!chart.domain().contains(u)) throw EvaluationDomain("parameter point outside the chart domain");
  chart.check_regular(u);
  f_ = chart.expand(u, degree);
  build();
}

ExtrinsicFields::ExtrinsicFields(const MetricSignature& ambient, SeriesVector f)
    : ambient_(ambient), f_(std::move(f)) {
  if (static_cast<int>(f_.size()) != ambient_.dimension()) throw DimensionError("immersion has wrong dimension");
  if (common_degree(f_) < 2) throw DimensionError("extrinsic fields need a chart expansion of degree at least 2");
  build();
}

void ExtrinsicFields::build() {
  n_ = f_.front().vars();
  degree_ = common_degree(f_);
  for (int i = 0; i < n_; ++i) df_.push_back(derivative(f_, i));

  g_.rows = n_;
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) g_.entries.push_back(inner(ambient_, df_[idx(i)], df_[idx(j)]));
  ginv_ = inverse(g_);

  std::vector<SeriesVector> ddf(static_cast<std::size_t>(n_ * n_));
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) ddf[idx(i, j)] = derivative(df_[idx(i)], j);

  gamma_.resize(static_cast<std::size_t>(n_ * n_ * n_));
  h_.resize(static_cast<std::size_t>(n_ * n_));
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) {
      const auto c = tangent_coordinates(ddf[idx(i, j)]);
      SeriesVector hij = ddf[idx(i, j)];
      for (int k = 0; k < n_; ++k) {
        gamma_[idx(k, i, j)] = c[idx(k)];
        hij -= c[idx(k)] * df_[idx(k)];
      }
      h_[idx(i, j)] = std::move(hij);
    }
  }

  if (degree_ >= 3) {
    nabla_h_.resize(static_cast<std::size_t>(n_ * n_ * n_));
    for (int k = 0; k < n_; ++k) {
      for (int i = 0; i < n_; ++i) {
        for (int j = 0; j < n_; ++j) {
          SeriesVector v = normal_part(derivative(h_[idx(i, j)], k));
          for (int l = 0; l < n_; ++l) {
            v -= christoffel(l, k, i) * h_[idx(l, j)];
            v -= christoffel(l, k, j) * h_[idx(i, l)];
          }
          nabla_h_[idx(k, i, j)] = std::move(v);
        }
      }
    }
  }
  if (degree_ >= 4) {
    nabla2_h_.resize(static_cast<std::size_t>(n_ * n_ * n_ * n_));
    for (int w = 0; w < n_; ++w) {
      for (int k = 0; k < n_; ++k) {
        for (int i = 0; i < n_; ++i) {
          for (int j = 0; j < n_; ++j) {
            SeriesVector v = normal_part(derivative(nabla_h_[idx(k, i, j)], w));
            for (int l = 0; l < n_; ++l) {
              v -= christoffel(l, w, k) * nabla_h_[idx(l, i, j)];
              v -= christoffel(l, w, i) * nabla_h_[idx(k, l, j)];
              v -= christoffel(l, w, j) * nabla_h_[idx(k, i, l)];
            }
            nabla2_h_[idx(w, k, i, j)] = std::move(v);
          }
        }
      }
    }
  }
}

const SeriesVector& ExtrinsicFields::nabla_h(int k, int i, int j) const {
  if (nabla_h_.empty()) throw EvaluationDomain("nabla h needs a chart expansion of degree 3");
  return nabla_h_[idx(k, i, j)];
}

const SeriesVector& ExtrinsicFields::nabla2_h(int w, int k, int i, int j) const {
  if (nabla2_h_.empty()) throw EvaluationDomain("nabla nabla h needs a chart expansion of degree 4");
  return nabla2_h_[idx(w, k, i, j)];
}

std::vector<Taylor> ExtrinsicFields::tangent_coordinates(const SeriesVector& v) const {
  std::vector<Taylor> pairing;
  for (int l = 0; l < n_; ++l) pairing.push_back(inner(ambient_, df_[idx(l)], v));
  std::vector<Taylor> c;
  for (int k = 0; k < n_; ++k) {
    Taylor ck = ginv_(k, 0) * pairing[0];
    for (int l = 1; l < n_; ++l) ck += ginv_(k, l) * pairing[idx(l)];
    c.push_back(std::move(ck));
  }
  return c;
}

SeriesVector ExtrinsicFields::tangent_vector(std::span<const Taylor> coords) const {
  SeriesVector out = coords[0] * df_[0];
  for (int k = 1; k < n_; ++k) out += coords[idx(k)] * df_[idx(k)];
  return out;
}

SeriesVector ExtrinsicFields::normal_part(const SeriesVector& v) const {
  const auto c = tangent_coordinates(v);
  return v - tangent_vector(c);
}

SeriesVector ExtrinsicFields::mean_curvature() const {
  SeriesVector out = ginv_(0, 0) * h_[0];
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      if (i + j > 0) out += ginv_(i, j) * h_[idx(i, j)];
  return (1.0 / n_) * out;
}

Vector ExtrinsicFields::h_at(const Vector& X, const Vector& Y) const {
  Vector out = Vector::Zero(ambient_.dimension());
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) out += X[i] * Y[j] * values(h_[idx(i, j)]);
  return out;
}

Vector ExtrinsicFields::nabla_h_at(const Vector& X, const Vector& Y, const Vector& Z) const {
  Vector out = Vector::Zero(ambient_.dimension());
  for (int k = 0; k < n_; ++k)
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) {
        const double w = X[k] * Y[i] * Z[j];
        if (w != 0.0) out += w * values(nabla_h(k, i, j));
      }
  return out;
}

Vector ExtrinsicFields::nabla2_h_at(const Vector& W, const Vector& X, const Vector& Y, const Vector& Z) const {
  Vector out = Vector::Zero(ambient_.dimension());
  for (int w = 0; w < n_; ++w)
    for (int k = 0; k < n_; ++k)
      for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) {
          const double c = W[w] * X[k] * Y[i] * Z[j];
          if (c != 0.0) out += c * values(nabla2_h(w, k, i, j));
        }
  return out;
}

Vector ExtrinsicFields::christoffel_at(const Vector& X, const Vector& Y) const {
  Vector out = Vector::Zero(n_);
  for (int k = 0; k < n_; ++k)
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) out[k] += christoffel(k, i, j).value() * X[i] * Y[j];
  return out;
}

Matrix ExtrinsicFields::metric_at() const { return g_.values(); }

Matrix ExtrinsicFields::basis_at() const {
  Matrix b(ambient_.dimension(), n_);
  for (int i = 0; i < n_; ++i) b.col(i) = values(df_[idx(i)]);
  return b;
}

Vector ExtrinsicState::h(const Vector& X, const Vector& Y) const {
  const int n = dimension();
  Vector out = Vector::Zero(point.size());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out += X[i] * Y[j] * h_coord[static_cast<std::size_t>(i * n + j)];
  return out;
}

Vector ExtrinsicState::coordinates(const Vector& v) const {
  const Vector rhs = basis.transpose() * ambient.gram() * v;
  return metric.ldlt().solve(rhs);
}

Vector ExtrinsicState::tangential_part(const Vector& v) const { return basis * coordinates(v); }

ExtrinsicState extrinsic_state(const ImmersionChart& chart, const Vector& u) {
  return extrinsic_state(ExtrinsicFields(chart, u, 2), u);
}

ExtrinsicState extrinsic_state(const ExtrinsicFields& fields, const Vector& u) {
  ExtrinsicState st;
  const int n = fields.parameter_dimension();
  const int m = fields.ambient().dimension();
  st.u = u;
  st.point = values(fields.immersion());
  st.ambient = fields.ambient();
  st.basis = fields.basis_at();
  st.metric = fields.metric_at();
  for (int k = 0; k < n; ++k) {
    Matrix c(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) c(i, j) = fields.christoffel(k, i, j).value();
    st.christoffel.push_back(c);
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) st.h_coord.push_back(values(fields.h(i, j)));

  std::vector<Vector> cols;
  for (int i = 0; i < n; ++i) cols.emplace_back(st.basis.col(i));
  const PseudoFrame tf = pseudo_gram_schmidt(cols, st.ambient);
  st.tangent_frame = tf.vectors;
  st.tangent_signs = tf.signs;
  st.frame_coordinates.resize(n, n);
  for (int a = 0; a < n; ++a) st.frame_coordinates.col(a) = st.coordinates(tf.vectors[static_cast<std::size_t>(a)]);

  // complete with the ambient standard basis, taking the least degenerate candidate each time
  std::vector<Vector> frame = tf.vectors;
  std::vector<int> signs = tf.signs;
  while (static_cast<int>(frame.size()) < m) {
    double best = 0.0;
    Vector best_w;
    for (int k = 0; k < m; ++k) {
      Vector w = Vector::Unit(m, k);
      for (int pass = 0; pass < 2; ++pass)
        for (std::size_t i = 0; i < frame.size(); ++i)
          w -= signs[i] * st.ambient.inner(w, frame[i]) * frame[i];
      const double q = std::abs(st.ambient.norm_squared(w));
      if (q > best + 1e-12) {
        best = q;
        best_w = w;
      }
    }
    if (best < 1e-10) throw NullIntermediate("normal frame cannot be completed");
    const double q = st.ambient.norm_squared(best_w);
    const int sign = q > 0 ? 1 : -1;
    frame.push_back(best_w / std::sqrt(best));
    signs.push_back(sign);
    st.normal_frame.push_back(frame.back());
    st.normal_signs.push_back(sign);
  }

  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      st.h_frame.push_back(st.h(st.frame_coordinates.col(a), st.frame_coordinates.col(b)));
  st.mean_curvature = mean_curvature(st);
  return st;
}

Vector mean_curvature(const ExtrinsicState& state) {
  const int n = state.dimension();
  Vector H = Vector::Zero(state.point.size());
  for (int a = 0; a < n; ++a) H += state.tangent_signs[static_cast<std::size_t>(a)] * state.h_frame[static_cast<std::size_t>(a * n + a)];
  return H / n;
}

Vector mean_curvature(const ExtrinsicState& state, std::span<const Vector> frame_coordinates) {
  const int n = state.dimension();
  if (static_cast<int>(frame_coordinates.size()) != n) throw DimensionError("frame must have n vectors");
  Vector H = Vector::Zero(state.point.size());
  for (const Vector& c : frame_coordinates) {
    const double q = c.dot(state.metric * c);
    H += (q > 0 ? 1.0 : -1.0) * state.h(c, c);
  }
  return H / n;
}

Matrix shape_operator(const ExtrinsicState& state, const Vector& xi, double tol) {
  const Vector t = state.tangential_part(xi);
  if (t.norm() > tol * (1.0 + xi.norm())) {
    throw NotNormal("vector has tangential component of size " + std::to_string(t.norm()));
  }
  const int n = state.dimension();
  Matrix pairing(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      pairing(i, j) = state.ambient.inner(state.h_coord[static_cast<std::size_t>(i * n + j)], xi);
  return state.metric.ldlt().solve(pairing);
}

namespace {

std::vector<Taylor> line_through(const Vector& u, const Vector& X, const Vector& accel, int degree) {
  std::vector<Taylor> args;
  const Taylor s = Taylor::variable(1, degree, 0, 0.0);
  for (Eigen::Index i = 0; i < u.size(); ++i) args.push_back(u[i] + X[i] * s - 0.5 * accel[i] * (s * s));
  return args;
}

NormalDerivative finish_normal_derivative(const ExtrinsicState& st, const Vector& xi0, const Vector& dxi,
                                          const Vector& X, double tol) {
  const Matrix A = shape_operator(st, xi0, tol);
  NormalDerivative out;
  out.tangential = st.tangential_part(dxi);
  out.normal = dxi - out.tangential;
  out.shape_residual = (out.tangential + st.tangent(A * X)).norm();
  return out;
}

}  // namespace

NormalDerivative normal_connection_derivative(const ImmersionChart& chart, const Vector& u, const Vector& X,
                                              const NormalSeriesField& xi, double tol) {
  const ExtrinsicState st = extrinsic_state(chart, u);
  const Vector accel = Vector::Zero(u.size());
  const auto args = line_through(u, X, accel, 1);
  const SeriesVector field = xi(args);
  return finish_normal_derivative(st, values(field), derivative_at(field, 1), X, tol);
}

NormalDerivative normal_connection_derivative(const ImmersionChart& chart, const Vector& u, const Vector& X,
                                              const NormalField& xi, double tol) {
  const ExtrinsicState st = extrinsic_state(chart, u);
  Vector acc(u.size());
  for (int k = 0; k < u.size(); ++k) acc[k] = X.dot(st.christoffel[static_cast<std::size_t>(k)] * X);
  auto along = [&](double s) -> Vector { return xi(u + s * X - 0.5 * s * s * acc); };
  double err = 0.0;
  const double scale = 1.0 / std::max(1.0, X.norm());
  const Vector dxi = richardson_derivative(along, 0.0, 1, 0.1 * scale, &err);
  return finish_normal_derivative(st, xi(u), dxi, X, tol);
}

Vector nabla_h(const ImmersionChart& chart, const Vector& u, const Vector& X, const Vector& Y, const Vector& Z) {
  return ExtrinsicFields(chart, u, 3).nabla_h_at(X, Y, Z);
}

Vector nabla2_h(const ImmersionChart& chart, const Vector& u, const Vector& W, const Vector& X, const Vector& Y,
                const Vector& Z) {
  return ExtrinsicFields(chart, u, 4).nabla2_h_at(W, X, Y, Z);
}

PointCheck is_totally_umbilical(const ImmersionChart& chart, std::span<const Vector> points, double tol) {
  PointCheck out;
  for (const Vector& u : points) {
    ExtrinsicState st;
    try {
      st = extrinsic_state(chart, u);
    } catch (const NullIntermediate&) {
      out.skipped.push_back(u);
      continue;
    }
    const int n = st.dimension();
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        const double g = a == b ? st.tangent_signs[static_cast<std::size_t>(a)] : 0.0;
        const double r = (st.h_frame[static_cast<std::size_t>(a * n + b)] - g * st.mean_curvature).norm();
        out.residual = std::max(out.residual, r);
      }
    ++out.evaluated;
  }
  out.holds = out.residual <= tol;
  return out;
}

PointCheck is_parallel_mean_curvature(const ImmersionChart& chart, std::span<const Vector> points,
                                      std::span<const Vector> directions, double tol) {
  PointCheck out;
  for (const Vector& u : points) {
    const ExtrinsicFields fields(chart, u, 3);
    const SeriesVector H = fields.mean_curvature();
    for (const Vector& X : directions) {
      SeriesVector dH = X[0] * derivative(H, 0);
      for (int k = 1; k < X.size(); ++k) dH += X[k] * derivative(H, k);
      out.residual = std::max(out.residual, values(fields.normal_part(dH)).norm());
    }
    ++out.evaluated;
  }
  out.holds = out.residual <= tol;
  return out;
}

GeodesicPath integrate_geodesic(const ImmersionChart& chart, const Vector& u0, const Vector& X0, double span,
                                int samples, double tol) {
  namespace ode = boost::numeric::odeint;
  const int n = chart.parameter_dimension();
  if (u0.size() != n || X0.size() != n) throw DimensionError("geodesic initial data has wrong dimension");
  if (!(span > 0.0) || samples < 1) throw DimensionError("geodesic span and sample count must be positive");
  const ExtrinsicState st0 = extrinsic_state(chart, u0);
  const double q0 = X0.dot(st0.metric * X0);
  if (std::abs(std::abs(q0) - 1.0) > 1e-8) throw DimensionError("geodesic initial direction must be unit");

  using State = std::vector<double>;
  auto rhs = [&](const State& x, State& dx, double) {
    Vector u = Eigen::Map<const Vector>(x.data(), n);
    Vector v = Eigen::Map<const Vector>(x.data() + n, n);
    if (!chart.domain().contains(u)) throw LeftDomain("geodesic left the chart domain");
    const ExtrinsicFields f(chart, u, 2);
    const Vector acc = f.christoffel_at(v, v);
    for (int i = 0; i < n; ++i) {
      dx[static_cast<std::size_t>(i)] = v[i];
      dx[static_cast<std::size_t>(n + i)] = -acc[i];
    }
  };
  State x(static_cast<std::size_t>(2 * n));
  for (int i = 0; i < n; ++i) {
    x[static_cast<std::size_t>(i)] = u0[i];
    x[static_cast<std::size_t>(n + i)] = X0[i];
  }
  std::vector<double> times;
  for (int i = 0; i <= samples; ++i) times.push_back(span * i / samples);

  GeodesicPath path;
  path.sign = q0 > 0 ? 1 : -1;
  const Vector gp0 = st0.basis * X0;
  const double speed0 = chart.ambient().inner(gp0, gp0);
  auto observer = [&](const State& y, double s) {
    Vector u = Eigen::Map<const Vector>(y.data(), n);
    Vector v = Eigen::Map<const Vector>(y.data() + n, n);
    if (!chart.domain().contains(u)) throw LeftDomain("geodesic left the chart domain");
    const ExtrinsicFields f(chart, u, 2);
    const Matrix B = f.basis_at();
    const Vector gp = B * v;
    path.s.push_back(s);
    path.u.push_back(u);
    path.velocity.push_back(v);
    path.points.push_back(values(f.immersion()));
    path.max_speed_drift = std::max(path.max_speed_drift, std::abs(chart.ambient().inner(gp, gp) - speed0));
  };
  auto stepper = ode::make_dense_output(tol, tol, ode::runge_kutta_dopri5<State>());
  ode::integrate_times(stepper, rhs, x, times.begin(), times.end(), span / (4.0 * samples), observer);
  return path;
}

GeodesicGerm geodesic_germ(const ImmersionChart& chart, const Vector& u, const Vector& X, int order) {
  const int n = chart.parameter_dimension();
  if (order < 1) throw DimensionError("geodesic germ order must be positive");
  const int D = std::max(order + 1, 2);
  const ExtrinsicFields fields(chart, u, D);
  const Taylor s = Taylor::variable(1, order, 0, 0.0);
  std::vector<Taylor> du;
  for (int i = 0; i < n; ++i) du.push_back(X[i] * s);
  // Picard iteration; each pass fixes one more coefficient
  for (int pass = 0; pass < order; ++pass) {
    std::vector<Taylor> vel;
    for (const auto& d : du) vel.push_back(d.derivative(0));
    std::vector<Taylor> next;
    for (int k = 0; k < n; ++k) {
      Taylor acc(1, order - 1, 0.0);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          const Taylor gk = compose(fields.christoffel(k, i, j), du);
          acc -= gk.truncated(order - 1) * vel[static_cast<std::size_t>(i)].truncated(order - 1) *
                 vel[static_cast<std::size_t>(j)].truncated(order - 1);
        }
      Taylor v = acc.truncated(std::max(order - 2, 0)).integral() + X[k];
      next.push_back(v.truncated(std::max(order - 1, 0)).integral());
    }
    du = std::move(next);
  }
  GeodesicGerm germ;
  for (int i = 0; i < n; ++i) germ.parameter.push_back(du[static_cast<std::size_t>(i)] + u[i]);
  germ.ambient = compose(fields.immersion(), du);
  return germ;
}

namespace {

// Points on the Euclidean unit sphere of dimension k from a Kronecker sequence.
Vector sphere_point(int k, double t, int index) {
  Vector v(k);
  if (k == 1) {
    v[0] = 1.0;
    return v;
  }
  if (k == 2) {
    const double th = std::numbers::pi * t;
    v << std::cos(th), std::sin(th);
    return v;
  }
  // generalized golden ratio sequence mapped through normal-free spherical angles
  double angles_left = 1.0;
  const double phi = std::pow(2.0, 1.0 / (k + 1));
  for (int i = 0; i < k - 1; ++i) {
    const double x = std::fmod(0.5 + (index + 1) * std::pow(1.0 / phi, i + 1), 1.0);
    const double th = (i == k - 2 ? 2.0 : 1.0) * std::numbers::pi * x;
    v[i] = angles_left * std::cos(th);
    angles_left *= std::sin(th);
  }
  v[k - 1] = angles_left;
  return v;
}

}  // namespace

std::vector<UnitTangent> unit_tangent_sweep(const ExtrinsicState& state, int count) {
  const int n = state.dimension();
  std::vector<int> space, time;
  for (int a = 0; a < n; ++a) (state.tangent_signs[static_cast<std::size_t>(a)] > 0 ? space : time).push_back(a);
  auto combine = [&](const std::vector<int>& idx, const Vector& w) {
    Vector c = Vector::Zero(n);
    for (std::size_t i = 0; i < idx.size(); ++i) c += w[static_cast<Eigen::Index>(i)] * state.frame_coordinates.col(idx[i]);
    return c;
  };
  std::vector<UnitTangent> out;
  for (int i = 0; i < count; ++i) {
    const double t = (i + 0.5) / count;
    UnitTangent x;
    if (time.empty() || space.empty()) {
      const auto& idx = time.empty() ? space : time;
      x.coords = combine(idx, sphere_point(static_cast<int>(idx.size()), t, i));
      x.sign = time.empty() ? 1 : -1;
    } else {
      const bool timelike = i % 2 == 1;
      const double rap = -2.0 + 4.0 * std::fmod(0.5 + i * 0.6180339887498949, 1.0);
      const Vector a = combine(space, sphere_point(static_cast<int>(space.size()), t, i));
      const Vector b = combine(time, sphere_point(static_cast<int>(time.size()), std::fmod(t * 1.618, 1.0), i));
      if (timelike) {
        x.coords = std::cosh(rap) * b + std::sinh(rap) * a;
        x.sign = -1;
      } else {
        x.coords = std::cosh(rap) * a + std::sinh(rap) * b;
        x.sign = 1;
      }
    }
    x.vector = state.tangent(x.coords);
    out.push_back(std::move(x));
  }
  return out;
}

UnitTangent orthogonal_unit_tangent(const ExtrinsicState& state, const UnitTangent& X) {
  const int n = state.dimension();
  if (n < 2) throw DimensionError("no orthogonal tangent on a curve");
  double best = 0.0;
  Vector best_c;
  for (int a = 0; a < n; ++a) {
    const Vector e = state.frame_coordinates.col(a);
    const Vector c = e - X.sign * e.dot(state.metric * X.coords) * X.coords;
    const double q = std::abs(c.dot(state.metric * c));
    if (q > best) {
      best = q;
      best_c = c;
    }
  }
  if (best < 1e-10) throw NullIntermediate("no non-null tangent orthogonal to X");
  UnitTangent y;
  const double q = best_c.dot(state.metric * best_c);
  y.sign = q > 0 ? 1 : -1;
  y.coords = best_c / std::sqrt(best);
  y.vector = state.tangent(y.coords);
  return y;
}

IsotropyProfile pseudo_isotropy_profile(const ImmersionChart& chart, std::span<const Vector> points,
                                        int directions) {
  IsotropyProfile out;
  out.min_value = std::numeric_limits<double>::infinity();
  out.max_value = -std::numeric_limits<double>::infinity();
  for (const Vector& u : points) {
    ExtrinsicState st;
    try {
      st = extrinsic_state(chart, u);
    } catch (const NullIntermediate&) {
      out.skipped.push_back(u);
      continue;
    }
    double lo = std::numeric_limits<double>::infinity(), hi = -lo, sum = 0.0;
    for (const UnitTangent& X : unit_tangent_sweep(st, directions)) {
      const Vector hxx = st.h(X.coords, X.coords);
      const double L = st.ambient.inner(hxx, hxx);
      lo = std::min(lo, L);
      hi = std::max(hi, L);
      sum += L;
      if (st.dimension() >= 2) {
        const UnitTangent Y = orthogonal_unit_tangent(st, X);
        out.cross_residual = std::max(out.cross_residual, std::abs(st.ambient.inner(hxx, st.h(X.coords, Y.coords))));
      }
    }
    out.point_spread.push_back(hi - lo);
    out.point_mean.push_back(sum / directions);
    out.min_value = std::min(out.min_value, lo);
    out.max_value = std::max(out.max_value, hi);
    ++out.evaluated_points;
  }
  out.global_spread = out.evaluated_points > 0 ? out.max_value - out.min_value : 0.0;
  return out;
}

StructuralResiduals structural_residuals(const ImmersionChart& chart, const Vector& u) {
  const int n = chart.parameter_dimension();
  const ExtrinsicFields f(chart, u, 3);
  const ExtrinsicState st = extrinsic_state(f, u);
  StructuralResiduals r;
  std::vector<Matrix> shapes;
  for (const Vector& xi : st.normal_frame) shapes.push_back(shape_operator(st, xi, 1e-6));
  for (int i = 0; i < n; ++i) {
    const Vector Ei = Vector::Unit(n, i);
    for (int j = 0; j < n; ++j) {
      const Vector Ej = Vector::Unit(n, j);
      const Vector h = st.h(Ei, Ej);
      r.normality = std::max(r.normality, st.tangential_part(h).norm());
      r.umbilicity = std::max(r.umbilicity, (h - st.metric(i, j) * st.mean_curvature).norm());
      for (std::size_t a = 0; a < shapes.size(); ++a) {
        const double lhs = Ej.dot(st.metric * (shapes[a] * Ei));
        r.duality = std::max(r.duality, std::abs(lhs - chart.ambient().inner(h, st.normal_frame[a])));
      }
      for (int k = 0; k < n; ++k) {
        const Vector Ek = Vector::Unit(n, k);
        r.codazzi = std::max(r.codazzi, (f.nabla_h_at(Ei, Ej, Ek) - f.nabla_h_at(Ej, Ei, Ek)).norm());
      }
    }
  }
  return r;
}

}  // namespace helixlab

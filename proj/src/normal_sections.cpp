#include "helixlab/normal_sections.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "helixlab/errors.hpp"

namespace helixlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double eval(const Taylor& t, double s) {
  double x = 0.0;
  for (int k = t.degree(); k >= 0; --k) x = x * s + t[static_cast<std::size_t>(k)];
  return x;
}

Vector eval(const SeriesVector& v, double s) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<Eigen::Index>(i)] = eval(v[i], s);
  return out;
}

Vector tangent_at(const SeriesVector& v, double s) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<Eigen::Index>(i)] = eval(v[i].derivative(0), s);
  return out;
}

// sum_i w_i v_i for a Euclidean weight vector
Taylor combine(const Vector& w, const SeriesVector& v) {
  Taylor out = w[0] * v[0];
  for (std::size_t i = 1; i < v.size(); ++i) out += w[static_cast<Eigen::Index>(i)] * v[i];
  return out;
}

SeriesVector scale_rows(const Matrix& a, const SeriesVector& v) {
  SeriesVector out;
  for (Eigen::Index r = 0; r < a.rows(); ++r) out.push_back(combine(a.row(r).transpose(), v));
  return out;
}

Matrix jacobian_of(const SeriesVector& f, int n) {
  Matrix j(static_cast<Eigen::Index>(f.size()), n);
  for (std::size_t i = 0; i < f.size(); ++i)
    for (int k = 0; k < n; ++k) j(static_cast<Eigen::Index>(i), k) = f[i][static_cast<std::size_t>(k + 1)];
  return j;
}

int default_order(const ImmersionChart& chart, const SectionOptions& opt) {
  if (opt.jet_order > 0) return opt.jet_order;
  return chart.is_analytic() ? 6 : 4;
}

double unit_check(const Matrix& metric, const Vector& X) {
  const double q = X.dot(metric * X);
  if (std::abs(std::abs(q) - 1.0) > 1e-8) throw DimensionError("direction must be a unit tangent");
  return q;
}

// Slice data at the base point.
struct Slice {
  Vector p;
  Matrix basis;
  Matrix constraints;
};

Slice make_slice(const ExtrinsicState& st, const Vector& Xa) {
  std::vector<Vector> span{Xa};
  span.insert(span.end(), st.normal_frame.begin(), st.normal_frame.end());
  Slice s;
  s.p = st.point;
  Matrix a(Xa.size(), static_cast<Eigen::Index>(span.size()));
  for (std::size_t i = 0; i < span.size(); ++i) a.col(static_cast<Eigen::Index>(i)) = span[i];
  s.basis = Eigen::HouseholderQR<Matrix>(a).householderQ() * Matrix::Identity(a.rows(), a.cols());
  s.constraints = orthogonal_complement(span, static_cast<int>(Xa.size()));
  return s;
}

// Germ at u of the curve cut by B^T (f - p) = 0, oriented along `hint`.
SectionGerm germ_at(const ImmersionChart& chart, const Vector& u, const Slice& slice, const Vector& hint, int order) {
  const int n = chart.parameter_dimension();
  const SeriesVector f = chart.expand(u, order);
  const Matrix Df = jacobian_of(f, n);
  const Vector f0 = values(f);
  const Matrix BtDf = slice.constraints.transpose() * Df;
  Vector t;
  if (BtDf.rows() == 0) {
    t = Vector::Ones(1);
  } else {
    Eigen::JacobiSVD<Matrix> svd(BtDf, Eigen::ComputeFullV);
    t = svd.matrixV().col(n - 1);
  }
  Vector T = Df * t;
  if (T.dot(hint) < 0) T = -T;
  T.normalize();
  Matrix J(n, n);
  J.topRows(n - 1) = BtDf;
  J.row(n - 1) = T.transpose() * Df;
  const Matrix Jinv = J.inverse();

  const Taylor tau = Taylor::variable(1, order, 0, 0.0);
  SeriesVector du;
  for (int i = 0; i < n; ++i) du.emplace_back(1, order, 0.0);
  for (int it = 0; it <= order; ++it) {
    const SeriesVector c = compose(f, du);
    SeriesVector r = scale_rows(slice.constraints.transpose(), c);
    r.push_back(combine(T, c) - T.dot(f0) - tau);
    for (auto& x : r) x[0] = 0.0;
    du -= scale_rows(Jinv, r);
  }
  const SeriesVector c = compose(f, du);
  UnitSpeedSeries us;
  try {
    us = unit_speed_series(c, chart.ambient());
  } catch (const NullSegment& e) {
    throw NullSection(std::string("normal section is null: ") + e.what());
  }
  SectionGerm g;
  const Taylor* arg = &us.parameter;
  for (int i = 0; i < n; ++i) {
    g.parameter.push_back(compose(du[static_cast<std::size_t>(i)], std::span<const Taylor>(arg, 1)) + u[i]);
  }
  g.ambient = us.curve;
  g.sign = us.sign;
  return g;
}

// ratios[d] = sigma_{d+1}/sigma_1 and margins[d] = sigma_d/sigma_1 of {gamma', ..., gamma^(d+1)}
void rank_profile(const SeriesVector& c, int max_d, std::vector<double>& ratios, std::vector<double>& margins) {
  std::vector<Vector> d;
  for (int k = 1; k <= max_d + 1; ++k) d.push_back(derivative_at(c, k));
  for (int dd = 1; dd <= max_d; ++dd) {
    const Vector sv = singular_values(std::span<const Vector>(d.data(), static_cast<std::size_t>(dd + 1)));
    const double top = sv[0] > 0 ? sv[0] : 1.0;
    const double ratio = sv.size() > dd ? sv[dd] / top : 0.0;
    const double margin = sv[dd - 1] / top;
    ratios[static_cast<std::size_t>(dd)] = std::max(ratios[static_cast<std::size_t>(dd)], ratio);
    margins[static_cast<std::size_t>(dd)] = std::min(margins[static_cast<std::size_t>(dd)], margin);
  }
}

int order_from(const std::vector<double>& ratios, double tol) {
  for (std::size_t d = 1; d < ratios.size(); ++d)
    if (ratios[d] <= tol) return static_cast<int>(d);
  return -1;
}

struct NodeStats {
  double tangential = 0.0;
  double slice = 0.0;
  double chart = 0.0;
};

NodeStats node_stats(const ImmersionChart& chart, const Slice& slice, const SectionGerm& g, const Vector& u) {
  NodeStats s;
  const ExtrinsicState st = extrinsic_state(chart, u);
  const Vector acc = derivative_at(g.ambient, 2);
  s.tangential = st.tangential_part(acc).norm();
  const Vector x = values(g.ambient);
  s.slice = (slice.constraints.transpose() * (x - slice.p)).norm();
  s.chart = (chart.position(u) - x).norm();
  return s;
}

bool correct(const ImmersionChart& chart, const Slice& slice, Vector& u, int max_newton) {
  const double scale = 1.0 + slice.p.norm();
  if (slice.constraints.cols() == 0) return true;
  for (int it = 0; it < max_newton; ++it) {
    if (!chart.domain().contains(u)) return false;
    const Vector F = slice.constraints.transpose() * (chart.position(u) - slice.p);
    if (F.norm() <= 1e-13 * scale) return true;
    const Matrix J = slice.constraints.transpose() * chart.jacobian(u);
    u -= J.completeOrthogonalDecomposition().solve(F);
  }
  const Vector F = slice.constraints.transpose() * (chart.position(u) - slice.p);
  return F.norm() <= 1e-13 * scale;
}

}  // namespace

double* Tolerances::find(std::string_view key) {
#define HELIXLAB_TOL(name) \
  if (key == #name) return &name;
  HELIXLAB_TOL(frenet)
  HELIXLAB_TOL(plane_identity)
  HELIXLAB_TOL(helix_identity)
  HELIXLAB_TOL(curvature_constancy)
  HELIXLAB_TOL(geodesic)
  HELIXLAB_TOL(slice)
  HELIXLAB_TOL(chart)
  HELIXLAB_TOL(rank)
  HELIXLAB_TOL(second_derivative)
  HELIXLAB_TOL(third_derivative)
  HELIXLAB_TOL(fourth_derivative)
  HELIXLAB_TOL(shape_operator)
  HELIXLAB_TOL(decomposition)
  HELIXLAB_TOL(rank_two_identity)
  HELIXLAB_TOL(ambient_curvature)
  HELIXLAB_TOL(isotropy)
  HELIXLAB_TOL(cross_isotropy)
  HELIXLAB_TOL(third_form_spread)
  HELIXLAB_TOL(codazzi)
  HELIXLAB_TOL(duality)
  HELIXLAB_TOL(normality)
  HELIXLAB_TOL(speed_drift)
  HELIXLAB_TOL(umbilicity)
  HELIXLAB_TOL(parallel_mean_curvature)
#undef HELIXLAB_TOL
  return nullptr;
}

std::vector<std::pair<std::string, double>> Tolerances::items() const {
  static const char* const keys[] = {"frenet",          "plane_identity",   "helix_identity",
                                     "curvature_constancy", "geodesic",     "slice",
                                     "chart",           "rank",             "second_derivative",
                                     "third_derivative", "fourth_derivative", "shape_operator",
                                     "decomposition",   "rank_two_identity", "ambient_curvature",
                                     "isotropy",        "cross_isotropy",   "third_form_spread",
                                     "codazzi",         "duality",          "normality",
                                     "speed_drift",     "umbilicity",       "parallel_mean_curvature"};
  Tolerances copy = *this;
  std::vector<std::pair<std::string, double>> out;
  for (const char* k : keys) out.emplace_back(k, *copy.find(k));
  return out;
}

Tolerances Tolerances::scaled(double factor) const {
  Tolerances t = *this;
  for (const auto& [k, v] : items()) *t.find(k) = v * factor;
  return t;
}

SectionGerm section_germ(const ImmersionChart& chart, const Vector& u, const Vector& X, int order) {
  const ExtrinsicState st = extrinsic_state(chart, u);
  unit_check(st.metric, X);
  const Vector Xa = st.tangent(X);
  return germ_at(chart, u, make_slice(st, Xa), Xa, order);
}

NormalSection trace_normal_section(const ImmersionChart& chart, const Vector& u0, const Vector& X,
                                   const SectionOptions& opt) {
  const int K = default_order(chart, opt);
  const int max_d = std::min(opt.max_planarity, K - 1);
  const ExtrinsicState st = extrinsic_state(chart, u0);
  const double q = unit_check(st.metric, X);
  if (!(opt.span > 0.0)) throw DimensionError("section span must be positive");
  const double step = opt.step > 0.0 ? opt.step : opt.span / 200.0;

  NormalSection sec;
  sec.geometry = chart.name();
  sec.base_u = u0;
  sec.base_point = st.point;
  sec.direction = X;
  sec.direction_vector = st.tangent(X);
  sec.sign = q > 0 ? 1 : -1;
  const Slice slice = make_slice(st, sec.direction_vector);
  sec.slice_basis = slice.basis;
  sec.constraints = slice.constraints;
  sec.rank_ratios.assign(static_cast<std::size_t>(max_d + 1), 0.0);
  sec.rank_margins.assign(static_cast<std::size_t>(max_d + 1), kInf);

  auto absorb = [&](const SectionGerm& g, const Vector& u, double s, std::vector<SectionPoint>& out) {
    if (g.sign != sec.sign) throw NullSection("section changed causal character");
    const NodeStats ns = node_stats(chart, slice, g, u);
    sec.max_tangential_acceleration = std::max(sec.max_tangential_acceleration, ns.tangential);
    sec.max_slice_distance = std::max(sec.max_slice_distance, ns.slice);
    sec.max_chart_residual = std::max(sec.max_chart_residual, ns.chart);
    rank_profile(g.ambient, max_d, sec.rank_ratios, sec.rank_margins);
    out.push_back({s, u, values(g.ambient), derivative_at(g.ambient, 1)});
  };

  std::vector<SectionPoint> forward, backward;
  const double half = 0.5 * opt.span;
  for (int dir : {1, -1}) {
    auto& out = dir > 0 ? forward : backward;
    Vector u = u0;
    SectionGerm g = germ_at(chart, u, slice, dir * sec.direction_vector, K);
    if (dir > 0) absorb(g, u, 0.0, out);
    double s = 0.0;
    while (s < half - 1e-12) {
      double h = std::min(step, half - s);
      bool done = false;
      for (int halving = 0; halving <= opt.max_halvings && !done; ++halving, h *= 0.5) {
        Vector cand = eval(g.parameter, h);
        if (!chart.domain().contains(cand)) break;
        if (correct(chart, slice, cand, opt.max_newton)) {
          const Vector hint = tangent_at(g.ambient, h);
          s += h;
          u = cand;
          g = germ_at(chart, u, slice, hint, K);
          absorb(g, u, dir * s, out);
          done = true;
        }
      }
      if (!done) {
        const Vector probe = eval(g.parameter, std::min(step, half - s));
        if (!chart.domain().contains(probe)) {
          sec.reached_boundary = true;
          break;
        }
        throw ContinuationStall("corrector failed near s = " + std::to_string(dir * s));
      }
    }
  }
  // backward nodes carry the reversed orientation; flip their tangents
  for (auto it = backward.rbegin(); it != backward.rend(); ++it) {
    it->tangent = -it->tangent;
    sec.trace.push_back(*it);
  }
  sec.trace.insert(sec.trace.end(), forward.begin(), forward.end());
  sec.geodesic = sec.max_tangential_acceleration < opt.tol.geodesic;
  sec.planarity_order = order_from(sec.rank_ratios, opt.tol.rank);
  return sec;
}

PlanarityProfile planarity_order(const ImmersionChart& chart, const NormalSection& section, int max_d,
                                 double tol_rank) {
  const int K = chart.is_analytic() ? std::max(6, max_d + 1) : 4;
  max_d = std::min(max_d, K - 1);
  const ExtrinsicState st = extrinsic_state(chart, section.base_u);
  const Slice slice = make_slice(st, section.direction_vector);
  PlanarityProfile p;
  p.rank_ratios.assign(static_cast<std::size_t>(max_d + 1), 0.0);
  p.rank_margins.assign(static_cast<std::size_t>(max_d + 1), kInf);
  for (const SectionPoint& pt : section.trace) {
    const SectionGerm g = germ_at(chart, pt.u, slice, pt.tangent, K);
    rank_profile(g.ambient, max_d, p.rank_ratios, p.rank_margins);
  }
  p.order = order_from(p.rank_ratios, tol_rank);
  return p;
}

CheckRecord make_record(std::string check_id, std::string geometry, Vector point, Vector direction, double residual,
                        double tolerance, bool expect_violation, std::string note) {
  CheckRecord r;
  r.check_id = std::move(check_id);
  r.geometry = std::move(geometry);
  r.point = std::move(point);
  r.direction = std::move(direction);
  r.residual = residual;
  r.tolerance = tolerance;
  r.expect_violation = expect_violation;
  r.pass = expect_violation ? residual > tolerance : residual <= tolerance;
  r.note = std::move(note);
  return r;
}

bool PropositionReport::passed() const {
  return std::all_of(records.begin(), records.end(), [](const CheckRecord& r) { return r.pass; });
}

double PropositionReport::max_residual() const {
  double m = 0.0;
  for (const auto& r : records)
    if (!r.expect_violation) m = std::max(m, r.residual);
  return m;
}

namespace {

// Covariant derivative along a geodesic: (nabla_X A_{h(X,X)} X) in coordinates.
Vector nabla_shape_along_geodesic(const ExtrinsicFields& f, const Vector& X) {
  const int n = f.parameter_dimension();
  const Taylor tau = Taylor::variable(1, 1, 0, 0.0);
  std::vector<Taylor> du;
  for (int i = 0; i < n; ++i) du.push_back(X[i] * tau);
  const Vector gxx = f.christoffel_at(X, X);
  std::vector<Taylor> Xs;
  for (int i = 0; i < n; ++i) Xs.push_back(X[i] - gxx[i] * tau);
  auto at = [&](const Taylor& t) { return compose(t, du).truncated(1); };
  auto at_v = [&](const SeriesVector& v) {
    SeriesVector out;
    for (const auto& x : v) out.push_back(at(x));
    return out;
  };
  const int m = f.ambient().dimension();
  SeriesVector xi;
  for (int a = 0; a < m; ++a) xi.emplace_back(1, 1, 0.0);
  std::vector<SeriesVector> h(static_cast<std::size_t>(n * n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      h[static_cast<std::size_t>(i * n + j)] = at_v(f.h(i, j));
      xi += (Xs[static_cast<std::size_t>(i)] * Xs[static_cast<std::size_t>(j)]) * h[static_cast<std::size_t>(i * n + j)];
    }
  std::vector<Taylor> pairing;
  for (int j = 0; j < n; ++j) {
    Taylor pj(1, 1, 0.0);
    for (int i = 0; i < n; ++i) pj += Xs[static_cast<std::size_t>(i)] * inner(f.ambient(), h[static_cast<std::size_t>(j * n + i)], xi);
    pairing.push_back(pj);
  }
  Vector Y0(n), dY(n);
  for (int k = 0; k < n; ++k) {
    Taylor yk(1, 1, 0.0);
    for (int j = 0; j < n; ++j) yk += at(f.inverse_metric(k, j)) * pairing[static_cast<std::size_t>(j)];
    Y0[k] = yk.value();
    dY[k] = yk[1];
  }
  return dY + f.christoffel_at(X, Y0);
}

Vector frame_or_zero(const FrenetApparatus& a, int i) {
  if (i < a.order) return a.frame[static_cast<std::size_t>(i)];
  return Vector::Zero(a.frame[0].size());
}

double sign_or_one(const FrenetApparatus& a, int i) {
  return i < a.order ? a.signs[static_cast<std::size_t>(i)] : 1.0;
}

double curvature_or_zero(const FrenetApparatus& a, int i) {
  return i < static_cast<int>(a.curvatures.size()) ? a.curvatures[static_cast<std::size_t>(i)] : 0.0;
}

SectionOptions short_trace(const SectionOptions& o) {
  SectionOptions s = o;
  s.span = std::min(o.span, 0.6);
  return s;
}

struct IntrinsicSample {
  FrenetApparatus intrinsic;
  SeriesVector ambient;   // unit-speed ambient germ
  Vector u;
  Vector direction;       // unit tangent, coordinates
  Vector residual;        // ambient image of the rank-two residual
  Matrix basis;
  int sign = 1;
};

// Unit-speed analysis of a curve germ given in parameter coordinates.
IntrinsicSample intrinsic_sample(const ImmersionChart& chart, const SeriesVector& param, int K) {
  const int n = chart.parameter_dimension();
  const Vector u = values(param);
  const ExtrinsicFields f(chart, u, K);
  std::vector<Taylor> du0;
  for (int i = 0; i < n; ++i) du0.push_back(param[static_cast<std::size_t>(i)] - u[i]);
  const SeriesVector c = compose(f.immersion(), du0);
  const UnitSpeedSeries us = unit_speed_series(c, chart.ambient());
  const Taylor* arg = &us.parameter;
  std::vector<Taylor> x;
  for (int i = 0; i < n; ++i) x.push_back(compose(du0[static_cast<std::size_t>(i)], std::span<const Taylor>(arg, 1)));

  auto at = [&](const Taylor& t) { return compose(t, x); };
  std::vector<SeriesVector> F;
  for (int i = 0; i < n; ++i) {
    SeriesVector col;
    for (const auto& e : f.partial(i)) col.push_back(at(e));
    F.push_back(col);
  }
  std::vector<Taylor> ginv;
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) ginv.push_back(at(f.inverse_metric(k, l)));
  const MetricSignature sig = chart.ambient();
  AlongCurveDerivative project = [&](const SeriesVector& v) {
    const SeriesVector dv = derivative(v, 0);
    std::vector<Taylor> pair;
    for (int l = 0; l < n; ++l) pair.push_back(inner(sig, F[static_cast<std::size_t>(l)], dv));
    SeriesVector out;
    for (std::size_t a = 0; a < dv.size(); ++a) out.push_back(dv[a] * 0.0);
    for (int k = 0; k < n; ++k) {
      Taylor ck = ginv[static_cast<std::size_t>(k * n)] * pair[0];
      for (int l = 1; l < n; ++l) ck += ginv[static_cast<std::size_t>(k * n + l)] * pair[static_cast<std::size_t>(l)];
      out += ck * F[static_cast<std::size_t>(k)];
    }
    return out;
  };
  FrenetOptions fo;
  fo.max_order = n;
  IntrinsicSample s;
  s.intrinsic = frenet_from_series(us.curve, sig, fo, project);
  s.ambient = us.curve;
  s.u = u;
  s.sign = us.sign;
  s.basis = f.basis_at();

  // Christoffel route: X = x', A = nabla_X X, B = nabla_X A
  auto gamma = [&](int k, const std::vector<Taylor>& a, const std::vector<Taylor>& b) {
    Taylor out = a[0] * 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        out += at(f.christoffel(k, i, j)) * a[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(j)];
    return out;
  };
  std::vector<Taylor> X, A, B;
  for (int i = 0; i < n; ++i) X.push_back(x[static_cast<std::size_t>(i)].derivative(0));
  for (int k = 0; k < n; ++k) A.push_back(X[static_cast<std::size_t>(k)].derivative(0) + gamma(k, X, X));
  for (int k = 0; k < n; ++k) B.push_back(A[static_cast<std::size_t>(k)].derivative(0) + gamma(k, X, A));
  Vector X0(n), A0(n), B0(n);
  for (int k = 0; k < n; ++k) {
    X0[k] = X[static_cast<std::size_t>(k)].value();
    A0[k] = A[static_cast<std::size_t>(k)].value();
    B0[k] = B[static_cast<std::size_t>(k)].value();
  }
  const Matrix g = f.metric_at();
  const Vector R = B0 + A0.dot(g * A0) * X0.dot(g * X0) * X0;
  s.direction = X0;
  s.residual = s.basis * R;
  return s;
}

SeriesVector curve_parameter_germ(const Curve& c, double t, int K) { return c.jet(t, K).series(); }

std::vector<double> sample_times(Interval span, int samples) {
  std::vector<double> ts;
  for (int i = 0; i < samples; ++i)
    ts.push_back(samples == 1 ? 0.5 * (span.lo + span.hi) : span.lo + span.width() * i / (samples - 1));
  return ts;
}

PropositionReport prop33_from_samples(const CatalogEntry& entry, const std::vector<IntrinsicSample>& samples,
                                      const Tolerances& tol, const std::string& label) {
  PropositionReport rep;
  rep.id = "prop33";
  rep.geometry = entry.name;
  std::vector<FrenetApparatus> apps;
  for (const auto& s : samples) apps.push_back(s.intrinsic);
  WCurveVerdict v;
  std::string verdict;
  try {
    v = summarize_w_curve(apps, tol.curvature_constancy);
    verdict = "intrinsic rank " + std::to_string(v.rank) + (v.is_w_curve ? ", W-curve" : ", not a W-curve");
  } catch (const InconsistentOrder& e) {
    verdict = std::string("not a W-curve: ") + e.what();
  }
  const bool vacuous = v.rank == 1 && v.is_w_curve;
  const bool w2 = v.is_w_curve && v.rank == 2;
  if (vacuous) rep.notes.push_back(label + ": intrinsic rank 1 (geodesic); the identity holds vacuously");
  if (w2 || vacuous) {
    for (const auto& s : samples) {
      rep.records.push_back(make_record("prop33.rank_two_identity", entry.name, s.u, s.direction, s.residual.norm(),
                                        tol.rank_two_identity, false, vacuous ? "vacuous" : verdict));
    }
    if (w2) {
      rep.records.push_back(make_record("prop33.intrinsic_k1_spread", entry.name, samples.front().u,
                                        samples.front().direction, v.curvature_deviations[0],
                                        tol.curvature_constancy * (1.0 + std::abs(v.curvature_means[0])), false,
                                        "intrinsic k1 = " + std::to_string(v.curvature_means[0])));
    }
    return rep;
  }
  // not a rank-2 W-curve: the identity must fail somewhere along the curve
  std::size_t worst = 0;
  for (std::size_t i = 1; i < samples.size(); ++i)
    if (samples[i].residual.norm() > samples[worst].residual.norm()) worst = i;
  rep.records.push_back(make_record("prop33.rank_two_identity", entry.name, samples[worst].u,
                                    samples[worst].direction, samples[worst].residual.norm(), tol.rank_two_identity,
                                    true, verdict));
  return rep;
}

}  // namespace

PropositionReport verify_prop31(const CatalogEntry& entry, const Vector& u0, const Vector& X,
                                const SectionOptions& opt) {
  const ImmersionChart& chart = entry.chart;
  const int K = std::max(default_order(chart, opt), 4);
  const NormalSection sec = trace_normal_section(chart, u0, X, short_trace(opt));
  if (!sec.geodesic) {
    throw NotGeodesicSection("normal section at the sample is not a geodesic (tangential acceleration " +
                             std::to_string(sec.max_tangential_acceleration) + ")");
  }
  const ExtrinsicFields f(chart, u0, std::max(K, 4));
  const ExtrinsicState st = extrinsic_state(f, u0);
  const SectionGerm g = section_germ(chart, u0, X, K);

  const Vector hxx = f.h_at(X, X);
  const Matrix A = shape_operator(st, hxx, 1e-6);
  const Vector AX = A * X;
  const Vector nh = f.nabla_h_at(X, X, X);
  const Matrix An = shape_operator(st, nh, 1e-6);
  const Vector rhs3 = -st.tangent(AX) + nh;
  const Vector rhs4 = -st.tangent(nabla_shape_along_geodesic(f, X)) - f.h_at(AX, X) - st.tangent(An * X) +
                      f.nabla2_h_at(X, X, X, X);

  PropositionReport rep;
  rep.id = "prop31";
  rep.geometry = entry.name;
  const Tolerances& t = opt.tol;
  rep.records.push_back(make_record("prop31.second_derivative", entry.name, u0, X,
                                    (derivative_at(g.ambient, 2) - hxx).norm(), t.second_derivative));
  rep.records.push_back(make_record("prop31.third_derivative", entry.name, u0, X,
                                    (derivative_at(g.ambient, 3) - rhs3).norm(), t.third_derivative));
  rep.records.push_back(make_record("prop31.fourth_derivative", entry.name, u0, X,
                                    (derivative_at(g.ambient, 4) - rhs4).norm(), t.fourth_derivative));
  return rep;
}

PropositionReport verify_prop32(const CatalogEntry& entry, const std::vector<TangentSample>& samples,
                                const SectionOptions& opt) {
  const ImmersionChart& chart = entry.chart;
  const int K = std::max(default_order(chart, opt), 5);
  const Tolerances& t = opt.tol;
  PropositionReport rep;
  rep.id = "prop32";
  rep.geometry = entry.name;
  for (const TangentSample& smp : samples) {
    const NormalSection sec = trace_normal_section(chart, smp.u, smp.direction, short_trace(opt));
    if (!sec.geodesic) throw NotGeodesicSection("normal section at a sample is not a geodesic");
    if (sec.planarity_order < 0 || sec.planarity_order > 3) {
      rep.hypothesis_met = false;
      rep.notes.push_back("section is not 3-planar at a sample");
    }
    const ExtrinsicFields f(chart, smp.u, 3);
    const ExtrinsicState st = extrinsic_state(f, smp.u);
    const SectionGerm g = section_germ(chart, smp.u, smp.direction, K);
    FrenetOptions fo;
    fo.max_order = 3;
    const FrenetApparatus app = frenet_from_series(g.ambient, chart.ambient(), fo);

    const double e1 = g.sign, e2 = sign_or_one(app, 1), e3 = sign_or_one(app, 2);
    const double k1 = curvature_or_zero(app, 0), k2 = curvature_or_zero(app, 1);
    const double dk1 = app.order >= 2 ? app.curvature_rates[0] : 0.0;
    const Vector V2 = frame_or_zero(app, 1), V3 = frame_or_zero(app, 2);
    const Vector Xa = st.tangent(smp.direction);

    const Vector hxx = f.h_at(smp.direction, smp.direction);
    const Vector AX = st.tangent(shape_operator(st, hxx, 1e-6) * smp.direction);
    const Vector nh = f.nabla_h_at(smp.direction, smp.direction, smp.direction);
    const Vector frenet_normal = e2 * dk1 * V2 + e2 * e3 * k1 * k2 * V3;
    const Vector g3 = derivative_at(g.ambient, 3);

    const auto& u = smp.u;
    const auto& X = smp.direction;
    rep.records.push_back(make_record("prop32.principal_normal", entry.name, u, X, (hxx - e2 * k1 * V2).norm(),
                                      t.shape_operator));
    rep.records.push_back(make_record("prop32.shape_operator", entry.name, u, X,
                                      (AX - e1 * e2 * k1 * k1 * Xa).norm(), t.shape_operator));
    rep.records.push_back(make_record("prop32.tangential_third_derivative", entry.name, u, X,
                                      (st.tangential_part(g3) + e1 * e2 * k1 * k1 * Xa).norm(), t.shape_operator));
    rep.records.push_back(make_record("prop32.normal_decomposition", entry.name, u, X, (nh - frenet_normal).norm(),
                                      t.decomposition));
    rep.records.push_back(make_record("prop32.full_decomposition", entry.name, u, X,
                                      ((nh - AX) - (-e1 * e2 * k1 * k1 * Xa + frenet_normal)).norm(),
                                      t.decomposition));
  }
  return rep;
}

PropositionReport verify_prop33_curve(const CatalogEntry& entry, const Curve& parameter_curve, Interval span,
                                      int samples, const Tolerances& tol) {
  if (samples < 1) throw DimensionError("need at least one sample");
  const int K = entry.chart.is_analytic() ? 6 : 4;
  std::vector<IntrinsicSample> data;
  for (double t : sample_times(span, samples)) {
    data.push_back(intrinsic_sample(entry.chart, curve_parameter_germ(parameter_curve, t, std::min(K, kMaxCurveJetOrder)), K));
  }
  return prop33_from_samples(entry, data, tol, parameter_curve.name().empty() ? "curve" : parameter_curve.name());
}

PropositionReport verify_prop33(const CatalogEntry& entry, const Vector& u0, const Vector& X,
                                const SectionOptions& opt) {
  const int K = default_order(entry.chart, opt);
  const NormalSection sec = trace_normal_section(entry.chart, u0, X, short_trace(opt));
  const ExtrinsicState st0 = extrinsic_state(entry.chart, u0);
  const Slice slice = make_slice(st0, st0.tangent(X));
  std::vector<IntrinsicSample> data;
  const std::size_t stride = std::max<std::size_t>(1, sec.trace.size() / 8);
  for (std::size_t i = 0; i < sec.trace.size(); i += stride) {
    const SectionPoint& pt = sec.trace[i];
    const SectionGerm g = germ_at(entry.chart, pt.u, slice, pt.tangent, K);
    data.push_back(intrinsic_sample(entry.chart, g.parameter, K));
  }
  return prop33_from_samples(entry, data, opt.tol, "normal section");
}

PropositionReport verify_prop34(const CatalogEntry& entry, const Curve& parameter_curve, Interval span, int samples,
                                const Tolerances& tol) {
  const ImmersionChart& chart = entry.chart;
  const int K = chart.is_analytic() ? 6 : 4;
  PropositionReport rep;
  rep.id = "prop34";
  rep.geometry = entry.name;
  const auto ts = sample_times(span, samples);
  std::vector<IntrinsicSample> data;
  std::vector<Vector> points;
  for (double t : ts) {
    data.push_back(intrinsic_sample(chart, curve_parameter_germ(parameter_curve, t, std::min(K, kMaxCurveJetOrder)), K));
    points.push_back(data.back().u);
  }
  const PointCheck umb = is_totally_umbilical(chart, points, tol.umbilicity);
  std::vector<Vector> dirs;
  for (const auto& d : data) dirs.push_back(d.direction);
  const PointCheck par = is_parallel_mean_curvature(chart, points, dirs, tol.parallel_mean_curvature);
  if (!umb.holds || !par.holds) {
    rep.hypothesis_met = false;
    rep.notes.push_back("chart is not totally umbilical with parallel mean curvature along the curve");
  }
  const PropositionReport p33 = prop33_from_samples(entry, data, tol, "curve");
  std::vector<FrenetApparatus> intrinsic;
  for (const auto& s : data) intrinsic.push_back(s.intrinsic);
  WCurveVerdict vi;
  try {
    vi = summarize_w_curve(intrinsic, tol.curvature_constancy);
  } catch (const InconsistentOrder&) {
  }
  if (vi.rank == 1) rep.notes.push_back("geodesic edge case: intrinsic osculating order 1");
  else if (!p33.passed() || !vi.is_w_curve || vi.rank != 2) {
    rep.hypothesis_met = false;
    rep.notes.push_back("curve is not an intrinsic rank-2 W-curve");
  }

  std::vector<FrenetApparatus> ambient;
  FrenetOptions fo;
  for (const auto& s : data) ambient.push_back(frenet_from_series(s.ambient, chart.ambient(), fo));
  WCurveVerdict va;
  try {
    va = summarize_w_curve(ambient, tol.curvature_constancy);
  } catch (const InconsistentOrder& e) {
    rep.notes.push_back(std::string("ambient order varies: ") + e.what());
  }
  const Vector& u = data.front().u;
  const Vector& X = data.front().direction;
  rep.records.push_back(make_record("prop34.ambient_rank", entry.name, u, X, std::abs(va.rank - 2.0), 0.0, false,
                                    "ambient rank " + std::to_string(va.rank)));
  if (va.rank >= 2) {
    rep.records.push_back(make_record("prop34.ambient_k1_spread", entry.name, u, X, va.curvature_deviations[0],
                                      tol.ambient_curvature, false,
                                      "ambient k1 = " + std::to_string(va.curvature_means[0])));
  }
  for (const auto& s : data) {
    const Vector g1 = derivative_at(s.ambient, 1), g2 = derivative_at(s.ambient, 2), g3 = derivative_at(s.ambient, 3);
    const MetricSignature& sig = chart.ambient();
    const Vector amb = g3 + sig.inner(g2, g2) * sig.inner(g1, g1) * g1;
    rep.records.push_back(make_record("prop34.ambient_identity", entry.name, s.u, s.direction, amb.norm(),
                                      tol.rank_two_identity));
    rep.records.push_back(make_record("prop34.residual_transfer", entry.name, s.u, s.direction,
                                      (amb - s.residual).norm(), tol.rank_two_identity));
  }
  return rep;
}

namespace {

bool sections_qualify(const CatalogEntry& entry, const std::vector<TangentSample>& checks, const SectionOptions& opt,
                      int max_planarity, std::string& why) {
  for (const TangentSample& s : checks) {
    try {
      const NormalSection sec = trace_normal_section(entry.chart, s.u, s.direction, short_trace(opt));
      if (!sec.geodesic) {
        why = "normal sections are not geodesic";
        return false;
      }
      if (sec.planarity_order < 0 || sec.planarity_order > max_planarity) {
        why = "normal sections are not " + std::to_string(max_planarity) + "-planar";
        return false;
      }
    } catch (const GeometryError& e) {
      why = std::string("section trace failed: ") + e.what();
      return false;
    }
  }
  return true;
}

}  // namespace

PropositionReport verify_thm33(const CatalogEntry& entry, const std::vector<Vector>& points, int directions,
                               const std::vector<TangentSample>& section_checks, const SectionOptions& opt) {
  PropositionReport rep;
  rep.id = "thm33";
  rep.geometry = entry.name;
  std::string why;
  rep.hypothesis_met = sections_qualify(entry, section_checks, opt, opt.max_planarity, why);
  if (!rep.hypothesis_met) rep.notes.push_back("hypothesis fails: " + why + "; spread is diagnostic only");
  double lo = kInf, hi = -kInf;
  for (const Vector& u : points) {
    const ExtrinsicFields f(entry.chart, u, 3);
    const ExtrinsicState st = extrinsic_state(f, u);
    for (const UnitTangent& X : unit_tangent_sweep(st, directions)) {
      const Vector nh = f.nabla_h_at(X.coords, X.coords, X.coords);
      const double q = entry.chart.ambient().inner(nh, nh);
      lo = std::min(lo, q);
      hi = std::max(hi, q);
    }
  }
  const Vector u = points.empty() ? Vector() : points.front();
  rep.records.push_back(make_record("thm33.third_form_spread", entry.name, u, Vector(), hi - lo,
                                    rep.hypothesis_met ? opt.tol.third_form_spread : kInf, false,
                                    rep.hypothesis_met ? "value " + std::to_string(hi) : "diagnostic"));
  return rep;
}

PropositionReport verify_lemma31(const CatalogEntry& entry, const std::vector<Vector>& points, int directions,
                                 const std::vector<TangentSample>& section_checks, const SectionOptions& opt) {
  PropositionReport rep;
  rep.id = "lemma31";
  rep.geometry = entry.name;
  std::string why;
  rep.hypothesis_met = sections_qualify(entry, section_checks, opt, 3, why);
  if (!rep.hypothesis_met) rep.notes.push_back("hypothesis fails: " + why + "; spread is diagnostic only");
  const IsotropyProfile prof = pseudo_isotropy_profile(entry.chart, points, directions);
  const Vector u = points.empty() ? Vector() : points.front();
  const double tol_spread = rep.hypothesis_met ? opt.tol.isotropy : kInf;
  rep.records.push_back(make_record("lemma31.isotropy_spread", entry.name, u, Vector(), prof.global_spread, tol_spread,
                                    false, "L in [" + std::to_string(prof.min_value) + ", " +
                                               std::to_string(prof.max_value) + "]"));
  rep.records.push_back(make_record("lemma31.orthogonality", entry.name, u, Vector(), prof.cross_residual,
                                    rep.hypothesis_met ? opt.tol.cross_isotropy : kInf));
  if (entry.facts.isotropy) {
    const double dev = std::max(std::abs(prof.max_value - *entry.facts.isotropy),
                                std::abs(prof.min_value - *entry.facts.isotropy));
    rep.records.push_back(make_record("lemma31.isotropy_value", entry.name, u, Vector(), dev, opt.tol.isotropy));
  }
  return rep;
}

PropositionReport check_normal_sections(const CatalogEntry& entry, const std::vector<TangentSample>& samples,
                                        const SectionOptions& opt) {
  PropositionReport rep;
  rep.id = "normal_sections";
  rep.geometry = entry.name;
  const Tolerances& t = opt.tol;
  for (const TangentSample& s : samples) {
    const NormalSection sec = trace_normal_section(entry.chart, s.u, s.direction, opt);
    const auto& u = s.u;
    const auto& X = s.direction;
    rep.records.push_back(make_record("sections.slice_membership", entry.name, u, X, sec.max_slice_distance, t.slice));
    rep.records.push_back(make_record("sections.chart_consistency", entry.name, u, X, sec.max_chart_residual, t.chart));
    const bool expect_geodesic = entry.facts.geodesic_sections;
    rep.records.push_back(make_record("sections.geodesic", entry.name, u, X, sec.max_tangential_acceleration,
                                      t.geodesic, !expect_geodesic,
                                      expect_geodesic ? "geodesic expected" : "non-geodesic control"));
    if (entry.facts.planarity_order) {
      const int d = *entry.facts.planarity_order;
      if (d < static_cast<int>(sec.rank_ratios.size())) {
        rep.records.push_back(make_record("sections.planarity_dependent", entry.name, u, X,
                                          sec.rank_ratios[static_cast<std::size_t>(d)], t.rank, false,
                                          "order " + std::to_string(sec.planarity_order)));
        rep.records.push_back(make_record("sections.planarity_exact", entry.name, u, X,
                                          sec.rank_margins[static_cast<std::size_t>(d)], t.rank, true));
      }
    }
  }
  return rep;
}

}  // namespace helixlab

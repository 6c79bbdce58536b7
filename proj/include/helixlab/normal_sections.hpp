#pragma once

#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "helixlab/catalog.hpp"
#include "helixlab/curve_engine.hpp"
#include "helixlab/submanifold_engine.hpp"

namespace helixlab {

struct Tolerances {
  double frenet = 1e-6;
  double plane_identity = 1e-8;
  double helix_identity = 1e-6;
  double curvature_constancy = 1e-5;
  double geodesic = 1e-6;
  double slice = 1e-9;
  double chart = 1e-10;
  double rank = 1e-8;
  double second_derivative = 1e-7;
  double third_derivative = 1e-5;
  double fourth_derivative = 1e-4;
  double shape_operator = 1e-6;
  double decomposition = 1e-5;
  double rank_two_identity = 1e-6;
  double ambient_curvature = 1e-6;
  double isotropy = 1e-8;
  double cross_isotropy = 1e-8;
  double third_form_spread = 1e-8;
  double codazzi = 1e-5;
  double duality = 1e-8;
  double normality = 1e-8;
  double speed_drift = 1e-9;
  double umbilicity = 1e-8;
  double parallel_mean_curvature = 1e-7;

  /// Named access for configuration overrides; nullptr for unknown keys.
  double* find(std::string_view key);
  std::vector<std::pair<std::string, double>> items() const;
  Tolerances scaled(double factor) const;
};

struct SectionOptions {
  double span = 1.0;   // traced over [-span/2, span/2]
  double step = 0.0;   // 0 means span / 200
  int max_newton = 20;
  int max_halvings = 8;
  int jet_order = 0;   // 0 picks 6 for analytic charts, 4 otherwise
  int max_planarity = 4;
  Tolerances tol;
};

struct SectionPoint {
  double s = 0.0;
  Vector u;
  Vector point;
  Vector tangent;  // gamma'(s)
};

/// Unit-speed germ of a normal section at one of its points.
struct SectionGerm {
  SeriesVector parameter;  // u(s), n series
  SeriesVector ambient;    // gamma(s), m series
  int sign = 1;            // causal sign of gamma'
};

struct NormalSection {
  std::string geometry;
  Vector base_u;
  Vector base_point;
  Vector direction;         // unit tangent, coordinates
  Vector direction_vector;  // the same in E^m_s
  int sign = 1;
  Matrix slice_basis;  // columns X, xi_1, ..., Euclidean-orthonormalized
  Matrix constraints;  // Euclidean-orthonormal complement of the slice
  std::vector<SectionPoint> trace;  // ordered by s
  bool reached_boundary = false;
  bool geodesic = false;
  double max_tangential_acceleration = 0.0;
  double max_slice_distance = 0.0;
  double max_chart_residual = 0.0;
  /// smallest d with gamma', ..., gamma^(d+1) dependent along the trace; -1 if above max_planarity
  int planarity_order = -1;
  /// entry d: largest sigma_{d+1}/sigma_1 of {gamma', ..., gamma^(d+1)} over the trace
  std::vector<double> rank_ratios;
  /// entry d: smallest sigma_d/sigma_1 of the same set over the trace
  std::vector<double> rank_margins;
};

/// Germ of the normal section through u in the direction X, solved as a
/// series from the implicit slice equations and reparametrized by
/// pseudo-arclength. Throws NullSection when the section is null at u.
SectionGerm section_germ(const ImmersionChart& chart, const Vector& u, const Vector& X, int order);

/// Throws ContinuationStall when the corrector fails at the smallest step
/// and NullSection when the traced tangent becomes null.
NormalSection trace_normal_section(const ImmersionChart& chart, const Vector& u0, const Vector& X,
                                   const SectionOptions& options = {});

struct PlanarityProfile {
  int order = -1;
  std::vector<double> rank_ratios;
  std::vector<double> rank_margins;
};
/// Recomputes the planarity order of a traced section with another bound.
PlanarityProfile planarity_order(const ImmersionChart& chart, const NormalSection& section, int max_d,
                                 double tol_rank = kDefaultTolRank);

struct CheckRecord {
  std::string check_id;
  std::string geometry;
  Vector point;
  Vector direction;
  double residual = 0.0;
  double tolerance = 0.0;
  /// negative controls pass when the residual exceeds the tolerance
  bool expect_violation = false;
  bool pass = false;
  std::string note;
};

CheckRecord make_record(std::string check_id, std::string geometry, Vector point, Vector direction, double residual,
                        double tolerance, bool expect_violation = false, std::string note = {});

struct PropositionReport {
  std::string id;
  std::string geometry;
  bool hypothesis_met = true;
  std::vector<CheckRecord> records;
  std::vector<std::string> notes;

  bool passed() const;
  double max_residual() const;
};

/// Derivatives of the section at (u0, X) against h(X,X), the third-derivative
/// identity and the four-term fourth-derivative identity. Throws
/// NotGeodesicSection when the section is not a geodesic.
PropositionReport verify_prop31(const CatalogEntry& entry, const Vector& u0, const Vector& X,
                                const SectionOptions& options = {});

/// h(X,X) = e2 k1 V2, A_{h(X,X)}X = e1 e2 k1^2 X and the Frenet decomposition
/// of gamma''' on every sample.
PropositionReport verify_prop32(const CatalogEntry& entry, const std::vector<TangentSample>& samples,
                                const SectionOptions& options = {});

/// Rank-two W-curve test of a curve in M (parameter coordinates), both by the
/// intrinsic Frenet apparatus and by the Christoffel residual of
/// nabla_X nabla_X X + g(nabla_X X, nabla_X X) g(X,X) X.
PropositionReport verify_prop33_curve(const CatalogEntry& entry, const Curve& parameter_curve, Interval span,
                                      int samples, const Tolerances& tol = {});
/// The same on the normal section at (u0, X).
PropositionReport verify_prop33(const CatalogEntry& entry, const Vector& u0, const Vector& X,
                                const SectionOptions& options = {});

/// Curve on a totally umbilical chart with parallel H that is an intrinsic
/// rank-two W-curve: ambient classification and the residual identity.
PropositionReport verify_prop34(const CatalogEntry& entry, const Curve& parameter_curve, Interval span, int samples,
                                const Tolerances& tol = {});

/// Spread of <(nabla_X h)(X,X), (nabla_X h)(X,X)> over unit tangents.
PropositionReport verify_thm33(const CatalogEntry& entry, const std::vector<Vector>& points, int directions,
                               const std::vector<TangentSample>& section_checks, const SectionOptions& options = {});

/// Constant pseudo-isotropy for charts whose sections are geodesic and 3-planar.
PropositionReport verify_lemma31(const CatalogEntry& entry, const std::vector<Vector>& points, int directions,
                                 const std::vector<TangentSample>& section_checks,
                                 const SectionOptions& options = {});

/// Geodesic flag, planarity order and slice membership of each sampled section.
PropositionReport check_normal_sections(const CatalogEntry& entry, const std::vector<TangentSample>& samples,
                                        const SectionOptions& options = {});

}  // namespace helixlab

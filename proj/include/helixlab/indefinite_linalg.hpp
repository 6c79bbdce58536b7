#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace helixlab {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline constexpr double kDefaultTolNull = 1e-8;
inline constexpr double kDefaultTolRank = 1e-8;

/// Pseudo-Euclidean space E^m_s: the first `index` coordinates carry a minus
/// sign, the remaining ones a plus sign.
class MetricSignature {
 public:
  MetricSignature(int dimension, int index);

  int dimension() const { return dimension_; }
  int index() const { return index_; }

  double sign(int i) const { return i < index_ ? -1.0 : 1.0; }
  Vector signs() const;
  Matrix gram() const;

  double inner(const Vector& u, const Vector& v) const;
  double norm_squared(const Vector& v) const { return inner(v, v); }

  bool operator==(const MetricSignature&) const = default;

 private:
  int dimension_;
  int index_;
};

double inner_product(const Vector& u, const Vector& v, const MetricSignature& sig);

enum class Causal { spacelike, timelike, null };

const char* to_string(Causal c);

struct CausalCharacter {
  Causal kind;
  double value;  // raw self inner product <v,v>
};

/// Classification is done on the Euclidean-normalized vector so that the
/// threshold does not depend on the length of v.
CausalCharacter causal_character(const Vector& v, const MetricSignature& sig,
                                 double tol_null = kDefaultTolNull);

struct PseudoFrame {
  std::vector<Vector> vectors;
  std::vector<int> signs;
};

/// Gram-Schmidt in the indefinite inner product. The first k outputs span the
/// same subspace as the first k inputs, and <V_i,V_j> = signs[i] delta_ij.
/// Throws RankDeficient for dependent inputs and NullIntermediate when an
/// orthogonalized vector is null.
PseudoFrame pseudo_gram_schmidt(std::span<const Vector> vectors, const MetricSignature& sig,
                                double tol_null = kDefaultTolNull,
                                double tol_rank = kDefaultTolRank);

/// Euclidean singular values of the matrix with the given columns, descending.
Vector singular_values(std::span<const Vector> vectors);

/// Numerical rank: count of singular values above tol_rank times the largest.
int dependence_order(std::span<const Vector> vectors, double tol_rank = kDefaultTolRank);

/// Euclidean-orthonormal basis of the orthogonal complement of span(vectors).
Matrix orthogonal_complement(std::span<const Vector> vectors, int ambient_dimension);

}  // namespace helixlab

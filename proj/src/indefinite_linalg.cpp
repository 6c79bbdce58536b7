#include "helixlab/indefinite_linalg.hpp"

#include <cmath>
#include <string>

#include "helixlab/errors.hpp"

namespace helixlab {

MetricSignature::MetricSignature(int dimension, int index) : dimension_(dimension), index_(index) {
  if (dimension <= 0) throw DimensionError("metric dimension must be positive");
  if (index < 0 || index > dimension) {
    throw DimensionError("metric index " + std::to_string(index) + " outside [0, " +
                         std::to_string(dimension) + "]");
  }
}

Vector MetricSignature::signs() const {
  Vector s(dimension_);
  for (int i = 0; i < dimension_; ++i) s[i] = sign(i);
  return s;
}

Matrix MetricSignature::gram() const { return signs().asDiagonal(); }

double MetricSignature::inner(const Vector& u, const Vector& v) const {
  if (u.size() != dimension_ || v.size() != dimension_) {
    throw DimensionError("inner product expects vectors of length " + std::to_string(dimension_));
  }
  const double negative = u.head(index_).dot(v.head(index_));
  const double positive = u.tail(dimension_ - index_).dot(v.tail(dimension_ - index_));
  return positive - negative;
}

double inner_product(const Vector& u, const Vector& v, const MetricSignature& sig) {
  return sig.inner(u, v);
}

const char* to_string(Causal c) {
  switch (c) {
    case Causal::spacelike: return "spacelike";
    case Causal::timelike: return "timelike";
    case Causal::null: return "null";
  }
  return "?";
}

CausalCharacter causal_character(const Vector& v, const MetricSignature& sig, double tol_null) {
  const double value = sig.inner(v, v);
  const double euclid = v.squaredNorm();
  if (euclid == 0.0) return {Causal::null, value};
  const double normalized = value / euclid;
  if (normalized > tol_null) return {Causal::spacelike, value};
  if (normalized < -tol_null) return {Causal::timelike, value};
  return {Causal::null, value};
}

PseudoFrame pseudo_gram_schmidt(std::span<const Vector> vectors, const MetricSignature& sig,
                                double tol_null, double tol_rank) {
  PseudoFrame frame;
  if (vectors.empty()) return frame;
  for (const auto& v : vectors) {
    if (v.size() != sig.dimension()) throw DimensionError("frame vector has wrong length");
  }
  if (dependence_order(vectors, tol_rank) < static_cast<int>(vectors.size())) {
    throw RankDeficient("input vectors are linearly dependent");
  }
  for (std::size_t k = 0; k < vectors.size(); ++k) {
    Vector w = vectors[k];
    // two passes keep the frame orthogonal to working precision
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t i = 0; i < frame.vectors.size(); ++i) {
        w -= frame.signs[i] * sig.inner(w, frame.vectors[i]) * frame.vectors[i];
      }
    }
    const auto cc = causal_character(w, sig, tol_null);
    if (cc.kind == Causal::null) {
      throw NullIntermediate("orthogonalized vector " + std::to_string(k) + " is null");
    }
    frame.signs.push_back(cc.value > 0 ? 1 : -1);
    frame.vectors.push_back(w / std::sqrt(std::abs(cc.value)));
  }
  return frame;
}

namespace {

Matrix as_columns(std::span<const Vector> vectors) {
  Matrix a(vectors.front().size(), static_cast<Eigen::Index>(vectors.size()));
  for (std::size_t j = 0; j < vectors.size(); ++j) {
    if (vectors[j].size() != a.rows()) throw DimensionError("vectors of mixed length");
    a.col(static_cast<Eigen::Index>(j)) = vectors[j];
  }
  return a;
}

}  // namespace

Vector singular_values(std::span<const Vector> vectors) {
  if (vectors.empty()) return Vector();
  return Eigen::JacobiSVD<Matrix>(as_columns(vectors)).singularValues();
}

int dependence_order(std::span<const Vector> vectors, double tol_rank) {
  if (vectors.empty()) return 0;
  const Vector sv = singular_values(vectors);
  if (sv.size() == 0 || sv[0] == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv[i] > tol_rank * sv[0]) ++rank;
  }
  return rank;
}

Matrix orthogonal_complement(std::span<const Vector> vectors, int ambient_dimension) {
  if (vectors.empty()) return Matrix::Identity(ambient_dimension, ambient_dimension);
  const Matrix a = as_columns(vectors);
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullU);
  const int rank = dependence_order(vectors);
  return svd.matrixU().rightCols(ambient_dimension - rank);
}

}  // namespace helixlab

#pragma once

// Vector- and matrix-valued Taylor series helpers.

#include <span>
#include <vector>

#include "helixlab/indefinite_linalg.hpp"
#include "helixlab/taylor.hpp"

namespace helixlab {

using SeriesVector = std::vector<Taylor>;

Vector values(const SeriesVector& v);
SeriesVector constant_series(const Vector& v, int vars, int degree);
int common_degree(const SeriesVector& v);

Taylor inner(const MetricSignature& sig, const SeriesVector& a, const SeriesVector& b);
Taylor euclidean_dot(const SeriesVector& a, const SeriesVector& b);
Taylor euclidean_dot(const Vector& a, const SeriesVector& b);

SeriesVector operator+(const SeriesVector& a, const SeriesVector& b);
SeriesVector operator-(const SeriesVector& a, const SeriesVector& b);
SeriesVector operator*(const Taylor& c, const SeriesVector& a);
SeriesVector operator*(double c, const SeriesVector& a);
SeriesVector& operator+=(SeriesVector& a, const SeriesVector& b);
SeriesVector& operator-=(SeriesVector& a, const SeriesVector& b);

SeriesVector derivative(const SeriesVector& v, int var);
SeriesVector truncated(const SeriesVector& v, int degree);
SeriesVector compose(const SeriesVector& f, std::span<const Taylor> deltas);

/// k-th derivative of a univariate vector series at the expansion point.
Vector derivative_at(const SeriesVector& v, int k);

/// Row-major square matrix of series.
struct SeriesMatrix {
  int rows = 0;
  std::vector<Taylor> entries;

  Taylor& operator()(int i, int j) { return entries[static_cast<std::size_t>(i * rows + j)]; }
  const Taylor& operator()(int i, int j) const {
    return entries[static_cast<std::size_t>(i * rows + j)];
  }
  Matrix values() const;
};

/// Inverse by Gaussian elimination with partial pivoting on constant terms.
SeriesMatrix inverse(const SeriesMatrix& m);

}  // namespace helixlab

#include "helixlab/series.hpp"

#include <cmath>

#include "helixlab/errors.hpp"

namespace helixlab {

Vector values(const SeriesVector& v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<Eigen::Index>(i)] = v[i].value();
  return out;
}

SeriesVector constant_series(const Vector& v, int vars, int degree) {
  SeriesVector out;
  out.reserve(static_cast<std::size_t>(v.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) out.emplace_back(vars, degree, v[i]);
  return out;
}

int common_degree(const SeriesVector& v) {
  int d = v.empty() ? 0 : v[0].degree();
  for (const auto& x : v) d = std::min(d, x.degree());
  return d;
}

Taylor inner(const MetricSignature& sig, const SeriesVector& a, const SeriesVector& b) {
  if (static_cast<int>(a.size()) != sig.dimension() || a.size() != b.size()) {
    throw DimensionError("series inner product: length mismatch");
  }
  Taylor out = a[0] * b[0] * sig.sign(0);
  for (int i = 1; i < sig.dimension(); ++i) out += a[i] * b[i] * sig.sign(i);
  return out;
}

Taylor euclidean_dot(const SeriesVector& a, const SeriesVector& b) {
  if (a.size() != b.size() || a.empty()) throw DimensionError("series dot: length mismatch");
  Taylor out = a[0] * b[0];
  for (std::size_t i = 1; i < a.size(); ++i) out += a[i] * b[i];
  return out;
}

Taylor euclidean_dot(const Vector& a, const SeriesVector& b) {
  if (static_cast<std::size_t>(a.size()) != b.size() || b.empty()) {
    throw DimensionError("series dot: length mismatch");
  }
  Taylor out = b[0] * a[0];
  for (std::size_t i = 1; i < b.size(); ++i) out += b[i] * a[static_cast<Eigen::Index>(i)];
  return out;
}

SeriesVector operator+(const SeriesVector& a, const SeriesVector& b) {
  SeriesVector out = a;
  return out += b;
}

SeriesVector operator-(const SeriesVector& a, const SeriesVector& b) {
  SeriesVector out = a;
  return out -= b;
}

SeriesVector& operator+=(SeriesVector& a, const SeriesVector& b) {
  if (a.size() != b.size()) throw DimensionError("series vector length mismatch");
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return a;
}

SeriesVector& operator-=(SeriesVector& a, const SeriesVector& b) {
  if (a.size() != b.size()) throw DimensionError("series vector length mismatch");
  for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
  return a;
}

SeriesVector operator*(const Taylor& c, const SeriesVector& a) {
  SeriesVector out;
  out.reserve(a.size());
  for (const auto& x : a) out.push_back(c * x);
  return out;
}

SeriesVector operator*(double c, const SeriesVector& a) {
  SeriesVector out;
  out.reserve(a.size());
  for (const auto& x : a) out.push_back(x * c);
  return out;
}

SeriesVector derivative(const SeriesVector& v, int var) {
  SeriesVector out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(x.derivative(var));
  return out;
}

SeriesVector truncated(const SeriesVector& v, int degree) {
  SeriesVector out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(x.truncated(degree));
  return out;
}

SeriesVector compose(const SeriesVector& f, std::span<const Taylor> deltas) {
  SeriesVector out;
  out.reserve(f.size());
  for (const auto& x : f) out.push_back(compose(x, deltas));
  return out;
}

Vector derivative_at(const SeriesVector& v, int k) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<Eigen::Index>(i)] = v[i].derivative_at(k);
  return out;
}

Matrix SeriesMatrix::values() const {
  Matrix out(rows, rows);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < rows; ++j) out(i, j) = (*this)(i, j).value();
  return out;
}

SeriesMatrix inverse(const SeriesMatrix& m) {
  const int n = m.rows;
  SeriesMatrix a = m;
  SeriesMatrix inv;
  inv.rows = n;
  const Taylor& proto = m.entries.front();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) inv.entries.emplace_back(proto.vars(), proto.degree(), i == j ? 1.0 : 0.0);
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r) {
      if (std::abs(a(r, col).value()) > std::abs(a(pivot, col).value())) pivot = r;
    }
    if (a(pivot, col).value() == 0.0) throw ImmersionSingular("singular series matrix");
    if (pivot != col) {
      for (int j = 0; j < n; ++j) {
        std::swap(a(pivot, j), a(col, j));
        std::swap(inv(pivot, j), inv(col, j));
      }
    }
    const Taylor scale = reciprocal(a(col, col));
    for (int j = 0; j < n; ++j) {
      a(col, j) = a(col, j) * scale;
      inv(col, j) = inv(col, j) * scale;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const Taylor factor = a(r, col);
      for (int j = 0; j < n; ++j) {
        a(r, j) -= factor * a(col, j);
        inv(r, j) -= factor * inv(col, j);
      }
    }
  }
  return inv;
}

}  // namespace helixlab

#pragma once

#include <cstdint>
#include <random>

#include "helixlab/indefinite_linalg.hpp"

namespace helixlab::testing {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
  Vector vector(int n, double lo = -1.0, double hi = 1.0) {
    Vector v(n);
    for (int i = 0; i < n; ++i) v[i] = uniform(lo, hi);
    return v;
  }
  Matrix matrix(int r, int c) {
    Matrix m(r, c);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) m(i, j) = uniform(-1.0, 1.0);
    return m;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace helixlab::testing

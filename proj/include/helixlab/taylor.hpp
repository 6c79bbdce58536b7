#pragma once

// Truncated multivariate Taylor series. Catalog geometries are written once
// against this type, which yields exact partial derivatives of any order up
// to the truncation degree (forward-mode automatic differentiation).

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace helixlab {

/// Graded monomial ordering for `vars` variables up to total degree `degree`.
/// Monomials of degree <= d occupy the first count(vars, d) slots for every
/// d, so truncation never reorders coefficients.
class MonomialBasis {
 public:
  static std::shared_ptr<const MonomialBasis> get(int vars, int degree);

  int vars() const { return vars_; }
  int degree() const { return degree_; }
  std::size_t size() const { return exponents_.size(); }
  std::size_t count_up_to(int degree) const { return offsets_[degree + 1]; }

  const std::vector<int>& exponents(std::size_t i) const { return exponents_[i]; }
  int total_degree(std::size_t i) const { return total_[i]; }
  std::size_t index_of(std::span<const int> exps) const;

  struct Product {
    std::size_t a, b, out;
  };
  const std::vector<Product>& products() const { return products_; }

  MonomialBasis(int vars, int degree);

 private:
  int vars_;
  int degree_;
  std::vector<std::vector<int>> exponents_;
  std::vector<int> total_;
  std::vector<std::size_t> offsets_;
  std::vector<Product> products_;
};

class Taylor {
 public:
  Taylor() : Taylor(0, 0, 0.0) {}
  Taylor(int vars, int degree, double constant = 0.0);

  static Taylor variable(int vars, int degree, int which, double at);

  int vars() const { return basis_->vars(); }
  int degree() const { return basis_->degree(); }
  std::size_t size() const { return coeffs_.size(); }
  const MonomialBasis& basis() const { return *basis_; }

  double value() const { return coeffs_[0]; }
  double& operator[](std::size_t i) { return coeffs_[i]; }
  double operator[](std::size_t i) const { return coeffs_[i]; }
  double coefficient(std::span<const int> exps) const;
  /// Partial derivative at the expansion point: coefficient times alpha!.
  double partial(std::span<const int> exps) const;
  /// Univariate shorthand: k-th derivative at the expansion point.
  double derivative_at(int k) const;

  Taylor derivative(int var) const;
  Taylor truncated(int degree) const;
  /// Same series with the constant term removed.
  Taylor without_constant() const;
  /// Univariate antiderivative vanishing at the expansion point.
  Taylor integral() const;

  Taylor& operator+=(const Taylor& o);
  Taylor& operator-=(const Taylor& o);
  Taylor& operator*=(const Taylor& o);
  Taylor& operator/=(const Taylor& o);
  Taylor& operator+=(double c);
  Taylor& operator-=(double c);
  Taylor& operator*=(double c);
  Taylor& operator/=(double c);
  Taylor operator-() const;

  /// f(a0 + x) = sum_k derivs[k]/k! x^k where x is this series minus its value.
  Taylor apply(std::span<const double> derivs) const;

 private:
  Taylor(std::shared_ptr<const MonomialBasis> basis, std::vector<double> coeffs);
  friend Taylor multiply(const Taylor&, const Taylor&);
  friend Taylor compose(const Taylor&, std::span<const Taylor>);

  std::shared_ptr<const MonomialBasis> basis_;
  std::vector<double> coeffs_;
};

Taylor operator+(Taylor a, const Taylor& b);
Taylor operator-(Taylor a, const Taylor& b);
Taylor operator*(const Taylor& a, const Taylor& b);
Taylor operator/(Taylor a, const Taylor& b);
Taylor operator+(Taylor a, double c);
Taylor operator+(double c, Taylor a);
Taylor operator-(Taylor a, double c);
Taylor operator-(double c, const Taylor& a);
Taylor operator*(Taylor a, double c);
Taylor operator*(double c, Taylor a);
Taylor operator/(Taylor a, double c);
Taylor operator/(double c, const Taylor& a);

Taylor multiply(const Taylor& a, const Taylor& b);
Taylor reciprocal(const Taylor& a);
Taylor sin(const Taylor& a);
Taylor cos(const Taylor& a);
Taylor sinh(const Taylor& a);
Taylor cosh(const Taylor& a);
Taylor exp(const Taylor& a);
Taylor log(const Taylor& a);
Taylor sqrt(const Taylor& a);
Taylor pow(const Taylor& a, double p);
Taylor pow(const Taylor& a, int p);

/// f(x0 + delta): `f` is a series in n variables, `deltas` holds n series in
/// a common basis whose constant terms are ignored. The result is exact up to
/// min(f.degree(), delta degree).
Taylor compose(const Taylor& f, std::span<const Taylor> deltas);

/// Inverse of a univariate series s(x) with s(0) = 0 and s'(0) != 0.
Taylor reversion(const Taylor& s);

}  // namespace helixlab

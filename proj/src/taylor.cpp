#include "helixlab/taylor.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <utility>

#include "helixlab/errors.hpp"

namespace helixlab {

namespace {

void compositions(int vars, int total, std::vector<int>& current, int position,
                  std::vector<std::vector<int>>& out) {
  if (position == vars - 1) {
    current[position] = total;
    out.push_back(current);
    return;
  }
  for (int e = total; e >= 0; --e) {
    current[position] = e;
    compositions(vars, total - e, current, position + 1, out);
  }
}

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

}  // namespace

MonomialBasis::MonomialBasis(int vars, int degree) : vars_(vars), degree_(degree) {
  if (vars < 0 || degree < 0) throw DimensionError("negative Taylor basis size");
  offsets_.push_back(0);
  for (int d = 0; d <= degree; ++d) {
    if (vars == 0) {
      if (d == 0) exponents_.push_back({});
    } else {
      std::vector<int> current(vars, 0);
      compositions(vars, d, current, 0, exponents_);
    }
    offsets_.push_back(exponents_.size());
  }
  for (const auto& e : exponents_) {
    int t = 0;
    for (int x : e) t += x;
    total_.push_back(t);
  }
  for (std::size_t a = 0; a < exponents_.size(); ++a) {
    for (std::size_t b = 0; b < exponents_.size(); ++b) {
      if (total_[a] + total_[b] > degree_) continue;
      std::vector<int> sum(vars_);
      for (int v = 0; v < vars_; ++v) sum[v] = exponents_[a][v] + exponents_[b][v];
      products_.push_back({a, b, index_of(sum)});
    }
  }
}

std::shared_ptr<const MonomialBasis> MonomialBasis::get(int vars, int degree) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::shared_ptr<const MonomialBasis>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[{vars, degree}];
  if (!slot) slot = std::make_shared<const MonomialBasis>(vars, degree);
  return slot;
}

std::size_t MonomialBasis::index_of(std::span<const int> exps) const {
  if (static_cast<int>(exps.size()) != vars_) throw DimensionError("monomial arity mismatch");
  int total = 0;
  for (int e : exps) total += e;
  if (total > degree_) throw DimensionError("monomial exceeds truncation degree");
  // position within the degree block: compositions are listed with the first
  // exponent descending, recursively
  std::size_t index = offsets_[total];
  int remaining = total;
  for (int v = 0; v + 1 < vars_; ++v) {
    const int slots = vars_ - v - 1;
    for (int e = remaining; e > exps[v]; --e) {
      // number of compositions of (remaining - e) into `slots` parts
      const int rest = remaining - e;
      double count = 1.0;
      for (int i = 1; i < slots; ++i) count = count * (rest + i) / i;
      index += static_cast<std::size_t>(std::llround(count));
    }
    remaining -= exps[v];
  }
  return index;
}

Taylor::Taylor(int vars, int degree, double constant)
    : basis_(MonomialBasis::get(vars, degree)), coeffs_(basis_->size(), 0.0) {
  coeffs_[0] = constant;
}

Taylor::Taylor(std::shared_ptr<const MonomialBasis> basis, std::vector<double> coeffs)
    : basis_(std::move(basis)), coeffs_(std::move(coeffs)) {}

Taylor Taylor::variable(int vars, int degree, int which, double at) {
  Taylor t(vars, degree, at);
  if (which < 0 || which >= vars) throw DimensionError("Taylor variable index out of range");
  if (degree >= 1) {
    std::vector<int> e(vars, 0);
    e[which] = 1;
    t.coeffs_[t.basis_->index_of(e)] = 1.0;
  }
  return t;
}

double Taylor::coefficient(std::span<const int> exps) const {
  int total = 0;
  for (int e : exps) total += e;
  if (total > degree()) return 0.0;
  return coeffs_[basis_->index_of(exps)];
}

double Taylor::partial(std::span<const int> exps) const {
  double f = 1.0;
  for (int e : exps) f *= factorial(e);
  return coefficient(exps) * f;
}

double Taylor::derivative_at(int k) const {
  if (vars() != 1) throw DimensionError("derivative_at requires a univariate series");
  if (k > degree()) throw DimensionError("derivative order exceeds truncation degree");
  return coeffs_[k] * factorial(k);
}

Taylor Taylor::derivative(int var) const {
  if (var < 0 || var >= vars()) throw DimensionError("derivative variable out of range");
  const int d = std::max(degree() - 1, 0);
  Taylor out(vars(), d);
  if (degree() == 0) return out;
  std::vector<int> e;
  for (std::size_t i = 0; i < out.size(); ++i) {
    e = out.basis_->exponents(i);
    e[var] += 1;
    out.coeffs_[i] = e[var] * coeffs_[basis_->index_of(e)];
  }
  return out;
}

Taylor Taylor::truncated(int degree) const {
  if (degree >= this->degree()) return *this;
  auto basis = MonomialBasis::get(vars(), degree);
  std::vector<double> c(coeffs_.begin(), coeffs_.begin() + static_cast<long>(basis->size()));
  return Taylor(std::move(basis), std::move(c));
}

Taylor Taylor::without_constant() const {
  Taylor out = *this;
  out.coeffs_[0] = 0.0;
  return out;
}

Taylor Taylor::integral() const {
  if (vars() != 1) throw DimensionError("integral requires a univariate series");
  Taylor out(1, degree() + 1);
  for (int k = 0; k <= degree(); ++k) out.coeffs_[k + 1] = coeffs_[k] / (k + 1);
  return out;
}

namespace {

// Brings two series to a common basis. A series with zero variables acts as
// a scalar constant.
std::pair<Taylor, Taylor> harmonize(const Taylor& a, const Taylor& b) {
  if (a.vars() == 0 && b.vars() != 0) return {Taylor(b.vars(), b.degree(), a.value()), b};
  if (b.vars() == 0 && a.vars() != 0) return {a, Taylor(a.vars(), a.degree(), b.value())};
  if (a.vars() != b.vars()) throw DimensionError("Taylor series with different variable counts");
  const int d = std::min(a.degree(), b.degree());
  return {a.truncated(d), b.truncated(d)};
}

}  // namespace

Taylor& Taylor::operator+=(const Taylor& o) {
  auto [a, b] = harmonize(*this, o);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) a.coeffs_[i] += b.coeffs_[i];
  return *this = std::move(a);
}

Taylor& Taylor::operator-=(const Taylor& o) {
  auto [a, b] = harmonize(*this, o);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) a.coeffs_[i] -= b.coeffs_[i];
  return *this = std::move(a);
}

Taylor& Taylor::operator*=(const Taylor& o) { return *this = multiply(*this, o); }
Taylor& Taylor::operator/=(const Taylor& o) { return *this = multiply(*this, reciprocal(o)); }

Taylor& Taylor::operator+=(double c) {
  coeffs_[0] += c;
  return *this;
}
Taylor& Taylor::operator-=(double c) {
  coeffs_[0] -= c;
  return *this;
}
Taylor& Taylor::operator*=(double c) {
  for (auto& x : coeffs_) x *= c;
  return *this;
}
Taylor& Taylor::operator/=(double c) {
  for (auto& x : coeffs_) x /= c;
  return *this;
}

Taylor Taylor::operator-() const {
  Taylor out = *this;
  for (auto& x : out.coeffs_) x = -x;
  return out;
}

Taylor multiply(const Taylor& x, const Taylor& y) {
  auto [a, b] = harmonize(x, y);
  std::vector<double> out(a.size(), 0.0);
  for (const auto& p : a.basis_->products()) out[p.out] += a.coeffs_[p.a] * b.coeffs_[p.b];
  return Taylor(a.basis_, std::move(out));
}

Taylor Taylor::apply(std::span<const double> derivs) const {
  Taylor x = without_constant();
  Taylor result(vars(), degree(), derivs.empty() ? 0.0 : derivs[0]);
  Taylor power(vars(), degree(), 1.0);
  double kfact = 1.0;
  const int top = std::min<int>(degree(), static_cast<int>(derivs.size()) - 1);
  for (int k = 1; k <= top; ++k) {
    power = multiply(power, x);
    kfact *= k;
    result += power * (derivs[k] / kfact);
  }
  return result;
}

Taylor operator+(Taylor a, const Taylor& b) { return a += b; }
Taylor operator-(Taylor a, const Taylor& b) { return a -= b; }
Taylor operator*(const Taylor& a, const Taylor& b) { return multiply(a, b); }
Taylor operator/(Taylor a, const Taylor& b) { return a /= b; }
Taylor operator+(Taylor a, double c) { return a += c; }
Taylor operator+(double c, Taylor a) { return a += c; }
Taylor operator-(Taylor a, double c) { return a -= c; }
Taylor operator-(double c, const Taylor& a) { return (-a) += c; }
Taylor operator*(Taylor a, double c) { return a *= c; }
Taylor operator*(double c, Taylor a) { return a *= c; }
Taylor operator/(Taylor a, double c) { return a /= c; }
Taylor operator/(double c, const Taylor& a) { return reciprocal(a) *= c; }

Taylor reciprocal(const Taylor& a) {
  const double a0 = a.value();
  std::vector<double> d(a.degree() + 1);
  double f = 1.0 / a0;
  for (int k = 0; k <= a.degree(); ++k) {
    d[k] = f;
    f *= -(k + 1) / a0;
  }
  return a.apply(d);
}

namespace {

template <class F>
Taylor apply_with(const Taylor& a, F&& derivative_k) {
  std::vector<double> d(a.degree() + 1);
  for (int k = 0; k <= a.degree(); ++k) d[k] = derivative_k(k);
  return a.apply(d);
}

}  // namespace

Taylor sin(const Taylor& a) {
  const double s = std::sin(a.value()), c = std::cos(a.value());
  const double cycle[4] = {s, c, -s, -c};
  return apply_with(a, [&](int k) { return cycle[k % 4]; });
}

Taylor cos(const Taylor& a) {
  const double s = std::sin(a.value()), c = std::cos(a.value());
  const double cycle[4] = {c, -s, -c, s};
  return apply_with(a, [&](int k) { return cycle[k % 4]; });
}

Taylor sinh(const Taylor& a) {
  const double s = std::sinh(a.value()), c = std::cosh(a.value());
  return apply_with(a, [&](int k) { return k % 2 == 0 ? s : c; });
}

Taylor cosh(const Taylor& a) {
  const double s = std::sinh(a.value()), c = std::cosh(a.value());
  return apply_with(a, [&](int k) { return k % 2 == 0 ? c : s; });
}

Taylor exp(const Taylor& a) {
  const double e = std::exp(a.value());
  return apply_with(a, [&](int) { return e; });
}

Taylor log(const Taylor& a) {
  const double a0 = a.value();
  return apply_with(a, [&](int k) {
    if (k == 0) return std::log(a0);
    return ((k % 2 == 1) ? 1.0 : -1.0) * factorial(k - 1) / std::pow(a0, k);
  });
}

Taylor pow(const Taylor& a, double p) {
  const double a0 = a.value();
  return apply_with(a, [&](int k) {
    double c = 1.0;
    for (int i = 0; i < k; ++i) c *= (p - i);
    return c * std::pow(a0, p - k);
  });
}

Taylor pow(const Taylor& a, int p) {
  if (p < 0) return reciprocal(pow(a, -p));
  Taylor result(a.vars(), a.degree(), 1.0);
  Taylor base = a;
  while (p > 0) {
    if (p & 1) result = multiply(result, base);
    p >>= 1;
    if (p) base = multiply(base, base);
  }
  return result;
}

Taylor sqrt(const Taylor& a) { return pow(a, 0.5); }

Taylor compose(const Taylor& f, std::span<const Taylor> deltas) {
  if (static_cast<int>(deltas.size()) != f.vars()) {
    throw DimensionError("compose: need one delta series per variable");
  }
  if (deltas.empty()) return Taylor(0, 0, f.value());
  const int vars = deltas[0].vars();
  int degree = f.degree();
  for (const auto& d : deltas) {
    if (d.vars() != vars) throw DimensionError("compose: delta series in different bases");
    degree = std::min(degree, d.degree());
  }
  const int n = f.vars();
  // powers[v][e] = delta_v^e
  std::vector<std::vector<Taylor>> powers(n);
  for (int v = 0; v < n; ++v) {
    Taylor dv = deltas[v].truncated(degree).without_constant();
    powers[v].reserve(degree + 1);
    powers[v].emplace_back(vars, degree, 1.0);
    for (int e = 1; e <= degree; ++e) powers[v].push_back(multiply(powers[v].back(), dv));
  }
  Taylor result(vars, degree, 0.0);
  const std::size_t count = f.basis_->count_up_to(degree);
  for (std::size_t i = 0; i < count; ++i) {
    const double c = f.coeffs_[i];
    if (c == 0.0) continue;
    const auto& e = f.basis_->exponents(i);
    Taylor term(vars, degree, c);
    for (int v = 0; v < n; ++v) {
      if (e[v] > 0) term = multiply(term, powers[v][e[v]]);
    }
    result += term;
  }
  return result;
}

Taylor reversion(const Taylor& s) {
  if (s.vars() != 1) throw DimensionError("reversion requires a univariate series");
  const double slope = s[1];
  if (s.degree() < 1 || slope == 0.0) throw DimensionError("reversion needs s'(0) != 0");
  const int d = s.degree();
  const Taylor y = Taylor::variable(1, d, 0, 0.0);
  Taylor x = y / slope;
  const Taylor shifted = s.without_constant();
  for (int it = 0; it < d; ++it) {
    const Taylor xs[1] = {x};
    x -= (compose(shifted, xs) - y) / slope;
  }
  return x;
}

}  // namespace helixlab

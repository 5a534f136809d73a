#include "bubbles/polynomial.hpp"

#include <algorithm>
#include <cassert>
#include <limits>

namespace bubbles {

Polynomial::Polynomial(std::vector<cplx> coeffs) : c_(std::move(coeffs)) { trim(); }

Polynomial::Polynomial(std::initializer_list<cplx> coeffs) : c_(coeffs) { trim(); }

Polynomial Polynomial::constant(cplx c) { return Polynomial(std::vector<cplx>{c}); }

Polynomial Polynomial::monomial(int degree, cplx c) {
  std::vector<cplx> v(static_cast<size_t>(degree) + 1, cplx{0.0, 0.0});
  v.back() = c;
  return Polynomial(std::move(v));
}

Polynomial Polynomial::linear_power(cplx r, int k) {
  Polynomial out = constant(1.0);
  const Polynomial lin{-r, 1.0};
  for (int i = 0; i < k; ++i) out = out * lin;
  return out;
}

void Polynomial::trim() {
  while (!c_.empty() && c_.back() == cplx{0.0, 0.0}) c_.pop_back();
}

int Polynomial::low_order_zeros() const {
  int k = 0;
  while (k < static_cast<int>(c_.size()) && c_[k] == cplx{0.0, 0.0}) ++k;
  return k;
}

cplx Polynomial::operator()(cplx z) const {
  cplx acc{0.0, 0.0};
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * z + *it;
  return acc;
}

double Polynomial::abs_scale(cplx z) const {
  const double r = std::abs(z);
  double acc = 0.0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * r + std::abs(*it);
  return acc;
}

cplx Polynomial::derivative_at(cplx z, int j) const {
  // Horner on the j-th derivative coefficients i!/(i-j)! c_i.
  cplx acc{0.0, 0.0};
  for (int i = degree(); i >= j; --i) {
    double f = 1.0;
    for (int t = 0; t < j; ++t) f *= static_cast<double>(i - t);
    acc = acc * z + f * c_[i];
  }
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (c_.size() <= 1) return {};
  std::vector<cplx> d(c_.size() - 1);
  for (size_t i = 1; i < c_.size(); ++i) d[i - 1] = static_cast<double>(i) * c_[i];
  return Polynomial(std::move(d));
}

double Polynomial::max_norm() const {
  double m = 0.0;
  for (const auto& c : c_) m = std::max(m, std::abs(c));
  return m;
}

Polynomial Polynomial::scaled(cplx s) const {
  std::vector<cplx> v(c_);
  for (auto& c : v) c *= s;
  return Polynomial(std::move(v));
}

Polynomial Polynomial::reversed(int degree) const {
  assert(degree >= this->degree());
  std::vector<cplx> v(static_cast<size_t>(degree) + 1, cplx{0.0, 0.0});
  for (int i = 0; i <= this->degree(); ++i) v[degree - i] = c_[i];
  return Polynomial(std::move(v));
}

Polynomial Polynomial::shift_down(int k) const {
  assert(k <= low_order_zeros());
  if (k >= static_cast<int>(c_.size())) return {};
  return Polynomial(std::vector<cplx>(c_.begin() + k, c_.end()));
}

Polynomial Polynomial::deflate(cplx r) const {
  if (c_.size() <= 1) return {};
  const int n = degree();
  std::vector<cplx> q(static_cast<size_t>(n));
  cplx acc = c_[n];
  for (int i = n - 1; i >= 0; --i) {
    q[i] = acc;
    acc = acc * r + c_[i];
  }
  return Polynomial(std::move(q));
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  std::vector<cplx> v(std::max(a.c_.size(), b.c_.size()), cplx{0.0, 0.0});
  for (size_t i = 0; i < a.c_.size(); ++i) v[i] += a.c_[i];
  for (size_t i = 0; i < b.c_.size(); ++i) v[i] += b.c_[i];
  return Polynomial(std::move(v));
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) {
  std::vector<cplx> v(std::max(a.c_.size(), b.c_.size()), cplx{0.0, 0.0});
  for (size_t i = 0; i < a.c_.size(); ++i) v[i] += a.c_[i];
  for (size_t i = 0; i < b.c_.size(); ++i) v[i] -= b.c_[i];
  return Polynomial(std::move(v));
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.c_.empty() || b.c_.empty()) return {};
  std::vector<cplx> v(a.c_.size() + b.c_.size() - 1, cplx{0.0, 0.0});
  for (size_t i = 0; i < a.c_.size(); ++i) {
    if (a.c_[i] == cplx{0.0, 0.0}) continue;
    for (size_t j = 0; j < b.c_.size(); ++j) v[i + j] += a.c_[i] * b.c_[j];
  }
  return Polynomial(std::move(v));
}

Polynomial cross_difference(const Polynomial& a, const Polynomial& b,
                            const Polynomial& c, const Polynomial& d) {
  const int n1 = a.is_zero() || b.is_zero() ? -1 : a.degree() + b.degree();
  const int n2 = c.is_zero() || d.is_zero() ? -1 : c.degree() + d.degree();
  const int n = std::max(n1, n2);
  if (n < 0) return {};
  std::vector<cplx> v(static_cast<size_t>(n) + 1, cplx{0.0, 0.0});
  std::vector<double> mag(v.size(), 0.0);
  auto accumulate = [&](const Polynomial& x, const Polynomial& y, double sign) {
    if (x.is_zero() || y.is_zero()) return;
    for (int i = 0; i <= x.degree(); ++i) {
      for (int j = 0; j <= y.degree(); ++j) {
        const cplx t = x.coeffs()[i] * y.coeffs()[j];
        v[i + j] += sign * t;
        mag[i + j] += std::abs(t);
      }
    }
  };
  accumulate(a, b, 1.0);
  accumulate(c, d, -1.0);
  constexpr double eps = std::numeric_limits<double>::epsilon();
  for (size_t k = 0; k < v.size(); ++k) {
    if (std::abs(v[k]) <= 16.0 * eps * mag[k]) v[k] = cplx{0.0, 0.0};
  }
  return Polynomial(std::move(v));
}

}  // namespace bubbles

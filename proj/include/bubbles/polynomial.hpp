#pragma once

#include <initializer_list>
#include <span>
#include <vector>

#include "bubbles/complex.hpp"

namespace bubbles {

// Numerical tolerances shared by the algebra layer. The defaults assume double
// precision with a few digits of headroom.
struct Tolerances {
  double root = 1e-12;     // backward error accepted from the root finder
  double cluster = 1e-8;   // roots closer than this are merged into one multiple root
  double gcd = 1e-10;      // p and q both below this (relative) => common root
  double cycle = 1e-9;     // closure tolerance for periodic orbits
};

// Dense univariate polynomial with complex coefficients in ascending degree order.
// Trailing (leading-degree) exact zeros are always trimmed, so the zero polynomial
// is the empty coefficient list.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<cplx> coeffs);
  Polynomial(std::initializer_list<cplx> coeffs);

  static Polynomial constant(cplx c);
  static Polynomial monomial(int degree, cplx c = 1.0);
  // (z - r)^k
  static Polynomial linear_power(cplx r, int k);

  const std::vector<cplx>& coeffs() const { return c_; }
  std::span<const cplx> span() const { return c_; }
  // -1 for the zero polynomial.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  cplx lead() const { return c_.empty() ? cplx{0.0, 0.0} : c_.back(); }
  cplx coeff(int i) const {
    return (i >= 0 && i < static_cast<int>(c_.size())) ? c_[i] : cplx{0.0, 0.0};
  }
  // Number of exactly-zero low-order coefficients (multiplicity of the root 0).
  int low_order_zeros() const;

  cplx operator()(cplx z) const;
  // Horner evaluation of sum |c_i| |z|^i, the natural scale for residuals at z.
  double abs_scale(cplx z) const;
  // j-th derivative evaluated at z.
  cplx derivative_at(cplx z, int j) const;

  Polynomial derivative() const;
  double max_norm() const;
  Polynomial scaled(cplx s) const;
  // Coefficients in reverse order padded to `degree` (z^degree p(1/z)).
  Polynomial reversed(int degree) const;
  // Exact division by z^k; requires k <= low_order_zeros().
  Polynomial shift_down(int k) const;
  // Synthetic division by (z - r); the remainder is discarded.
  Polynomial deflate(cplx r) const;

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(cplx s, const Polynomial& a) { return a.scaled(s); }

 private:
  void trim();
  std::vector<cplx> c_;
};

// a*b - c*d with rounding-level cancellation flushed to exact zero: a coefficient
// whose magnitude is below a few ulps of the sum of the magnitudes of the terms
// that produced it is set to 0. Keeps exact structural zeros (e.g. the z^2 factor
// of a derivative numerator) exact.
Polynomial cross_difference(const Polynomial& a, const Polynomial& b,
                            const Polynomial& c, const Polynomial& d);

}  // namespace bubbles

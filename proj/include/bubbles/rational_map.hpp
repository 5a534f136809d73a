#pragma once

#include <optional>
#include <vector>

#include "bubbles/complex.hpp"
#include "bubbles/polynomial.hpp"
#include "bubbles/roots.hpp"

namespace bubbles {

// A periodic orbit on the sphere.
struct Cycle {
  std::vector<ExtComplex> points;
  int period = 1;
  cplx multiplier{0.0, 0.0};
};

// p(z)/q(z) acting on the Riemann sphere. Immutable after construction.
class RationalMap {
 public:
  // Validates: q != 0, degree >= 1, no numerically shared root.
  RationalMap(Polynomial num, Polynomial den, const Tolerances& tol = {});

  static RationalMap polynomial(Polynomial p, const Tolerances& tol = {});
  // Skips the common-root check (used for derived maps such as derivatives).
  static RationalMap unchecked(Polynomial num, Polynomial den, const Tolerances& tol = {});

  const Polynomial& num() const { return num_; }
  const Polynomial& den() const { return den_; }
  int degree() const { return degree_; }
  const Tolerances& tolerances() const { return tol_; }
  bool is_polynomial() const { return den_.degree() == 0; }

  // Sphere-aware evaluation. Throws IndeterminateError when p and q both vanish.
  ExtComplex operator()(ExtComplex z) const;
  // f'(z) at a finite non-pole point.
  cplx derivative_at(cplx z) const;

  // Derivative of f expressed in local charts (w = 1/z around infinity) at x.
  // This is the factor that multiplies along a cycle.
  cplx chart_derivative(ExtComplex x) const;

  // Local degree of f at x (1 for a non-critical point).
  int local_degree(ExtComplex x) const;

  // q(z) vanishes to within rounding of its scale at z.
  bool near_pole(cplx z) const;

  // True when infinity is a fixed point of local degree >= 2.
  bool infinity_superattracting() const;

 private:
  RationalMap(Polynomial num, Polynomial den, const Tolerances& tol, bool check);

  Polynomial num_;
  Polynomial den_;
  int degree_ = 0;
  Tolerances tol_{};
};

ExtComplex eval(const RationalMap& f, ExtComplex z);

// (p'q - pq') / q^2, with the factor (z - r)^(k-1) of every k-fold root r of q
// cancelled from numerator and denominator.
RationalMap derivative(const RationalMap& f);

struct CriticalPoint {
  ExtComplex point;
  int local_degree = 2;
};

// Finite critical points (roots of the derivative numerator), poles of order >= 2
// and infinity when its local degree is >= 2. Sum of (local_degree - 1) is 2d - 2.
std::vector<CriticalPoint> critical_points(const RationalMap& f, const RootOptions& opts = {});

struct PeriodicOptions {
  int max_period = 6;
  int degree_cap = 2000;
  RootOptions roots{};
};

// Cycles of exact period p, found as roots of the numerator of f^p(z) - z.
// Throws PeriodTooLargeError when d^p exceeds the degree cap.
std::vector<Cycle> periodic_points(const RationalMap& f, int p, const PeriodicOptions& opts = {});

// The d solutions of f(z) = w, repeated according to multiplicity.
std::vector<ExtComplex> preimages(const RationalMap& f, ExtComplex w, const RootOptions& opts = {});

// Iterate n times on the sphere.
ExtComplex iterate(const RationalMap& f, ExtComplex z, int n);

// Multiplier of the cycle through the given points (chain rule in charts).
cplx cycle_multiplier(const RationalMap& f, const std::vector<ExtComplex>& points);

// True when points[i] maps to points[i+1 mod n] within tol (chordal).
bool cycle_closes(const RationalMap& f, const Cycle& c, double tol);

}  // namespace bubbles

#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <string>

namespace bubbles {

using cplx = std::complex<double>;

// A point of the Riemann sphere: a finite complex number or the point at infinity.
class ExtComplex {
 public:
  constexpr ExtComplex() = default;
  constexpr ExtComplex(cplx z) : z_(z) {}  // NOLINT(google-explicit-constructor)
  constexpr ExtComplex(double re, double im = 0.0) : z_(re, im) {}  // NOLINT

  static constexpr ExtComplex infinity() {
    ExtComplex e;
    e.inf_ = true;
    return e;
  }

  constexpr bool is_infinite() const { return inf_; }
  constexpr bool is_finite() const { return !inf_; }

  // Only meaningful for finite points.
  constexpr cplx value() const { return z_; }

  bool operator==(const ExtComplex& o) const {
    return inf_ == o.inf_ && (inf_ || z_ == o.z_);
  }

 private:
  cplx z_{0.0, 0.0};
  bool inf_ = false;
};

// Chordal metric on the sphere, values in [0, 2].
inline double chordal_distance(ExtComplex a, ExtComplex b) {
  if (a.is_infinite() && b.is_infinite()) return 0.0;
  if (a.is_infinite()) return 2.0 / std::sqrt(1.0 + std::norm(b.value()));
  if (b.is_infinite()) return 2.0 / std::sqrt(1.0 + std::norm(a.value()));
  const cplx z = a.value();
  const cplx w = b.value();
  return 2.0 * std::abs(z - w) / std::sqrt((1.0 + std::norm(z)) * (1.0 + std::norm(w)));
}

std::string to_string(ExtComplex z);

}  // namespace bubbles

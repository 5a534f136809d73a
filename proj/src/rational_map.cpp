#include "bubbles/rational_map.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bubbles/errors.hpp"

namespace bubbles {
namespace {

constexpr double kLocalDegreeTol = 1e-6;
constexpr double kPoleTol = 1e-9;

double derivative_scale(const Polynomial& p, cplx z, int j) {
  const double r = std::abs(z);
  double acc = 0.0;
  for (int i = p.degree(); i >= j; --i) {
    double f = 1.0;
    for (int t = 0; t < j; ++t) f *= static_cast<double>(i - t);
    acc = acc * r + f * std::abs(p.coeffs()[i]);
  }
  return acc;
}

// Order of vanishing of p - v q at x, judged relative to the natural scale of
// each derivative of the two terms (so cancellation in p - v q is not mistaken
// for a nonzero value).
int order_of_zero(const Polynomial& p, const Polynomial& q, cplx v, cplx x, double tol) {
  const int n = std::max(p.degree(), q.degree());
  for (int j = 0; j <= n; ++j) {
    const double s = derivative_scale(p, x, j) + std::abs(v) * derivative_scale(q, x, j);
    if (s == 0.0) continue;
    const cplx val = p.derivative_at(x, j) - v * q.derivative_at(x, j);
    if (std::abs(val) > tol * s) return j;
  }
  return n;
}

int order_of_zero(const Polynomial& g, cplx x, double tol) {
  return order_of_zero(g, Polynomial{}, 0.0, x, tol);
}

// (a/b)'(x)
cplx ratio_derivative(const Polynomial& a, const Polynomial& b, cplx x) {
  const cplx av = a(x);
  const cplx bv = b(x);
  const cplx da = a.derivative_at(x, 1);
  const cplx db = b.derivative_at(x, 1);
  return (da * bv - av * db) / (bv * bv);
}

bool less_ext(const ExtComplex& a, const ExtComplex& b) {
  if (a.is_infinite() != b.is_infinite()) return b.is_infinite();
  if (a.is_infinite()) return false;
  if (a.value().real() != b.value().real()) return a.value().real() < b.value().real();
  return a.value().imag() < b.value().imag();
}

}  // namespace

RationalMap::RationalMap(Polynomial num, Polynomial den, const Tolerances& tol)
    : RationalMap(std::move(num), std::move(den), tol, true) {}

RationalMap RationalMap::polynomial(Polynomial p, const Tolerances& tol) {
  return RationalMap(std::move(p), Polynomial::constant(1.0), tol, true);
}

RationalMap RationalMap::unchecked(Polynomial num, Polynomial den, const Tolerances& tol) {
  return RationalMap(std::move(num), std::move(den), tol, false);
}

RationalMap::RationalMap(Polynomial num, Polynomial den, const Tolerances& tol, bool check)
    : num_(std::move(num)), den_(std::move(den)), tol_(tol) {
  if (den_.is_zero()) throw InvalidMapError("rational map: zero denominator");
  degree_ = std::max(num_.degree(), den_.degree());
  if (!check) return;
  if (degree_ < 1) throw InvalidMapError("rational map: degree must be >= 1");
  if (den_.degree() >= 1 && !num_.is_zero()) {
    for (const auto& r : poly_roots(den_)) {
      const cplx pv = num_(r.value);
      if (std::abs(pv) <= tol_.gcd * std::max(num_.abs_scale(r.value), 1e-300)) {
        throw InvalidMapError("rational map: numerator and denominator share the root " +
                              to_string(ExtComplex(r.value)));
      }
    }
  }
}

ExtComplex RationalMap::operator()(ExtComplex z) const {
  const int d = degree_;
  if (z.is_infinite()) {
    const cplx pd = num_.coeff(d);
    const cplx qd = den_.coeff(d);
    if (qd == cplx{0.0, 0.0}) return ExtComplex::infinity();
    return ExtComplex(pd / qd);
  }
  const cplx x = z.value();
  cplx a;
  cplx b;
  double sa;
  double sb;
  if (std::abs(x) <= 1.0) {
    a = num_(x);
    b = den_(x);
    sa = num_.abs_scale(x);
    sb = den_.abs_scale(x);
  } else {
    // Both polynomials reversed at the common degree d: p(x)/q(x) = p*(1/x)/q*(1/x).
    const cplx y = 1.0 / x;
    const Polynomial pr = num_.reversed(d);
    const Polynomial qr = den_.reversed(d);
    a = pr(y);
    b = qr(y);
    sa = pr.abs_scale(y);
    sb = qr.abs_scale(y);
  }
  if (std::abs(a) <= tol_.gcd * sa && std::abs(b) <= tol_.gcd * sb) {
    throw IndeterminateError("eval: numerator and denominator both vanish at " + to_string(z));
  }
  if (b == cplx{0.0, 0.0}) return ExtComplex::infinity();
  const cplx r = a / b;
  if (!std::isfinite(r.real()) || !std::isfinite(r.imag())) return ExtComplex::infinity();
  return ExtComplex(r);
}

bool RationalMap::near_pole(cplx z) const {
  return den_.degree() >= 1 && std::abs(den_(z)) <= kPoleTol * den_.abs_scale(z);
}

cplx RationalMap::derivative_at(cplx z) const { return ratio_derivative(num_, den_, z); }

cplx RationalMap::chart_derivative(ExtComplex x) const {
  if (x.is_finite()) {
    const cplx z = x.value();
    if (near_pole(z)) return ratio_derivative(den_, num_, z);
    return ratio_derivative(num_, den_, z);
  }
  const Polynomial pr = num_.reversed(degree_);
  const Polynomial qr = den_.reversed(degree_);
  if (qr.coeff(0) == cplx{0.0, 0.0}) return ratio_derivative(qr, pr, 0.0);
  return ratio_derivative(pr, qr, 0.0);
}

int RationalMap::local_degree(ExtComplex x) const {
  if (x.is_finite()) {
    const cplx z = x.value();
    if (near_pole(z)) return std::max(1, order_of_zero(den_, z, kLocalDegreeTol));
    const ExtComplex v = (*this)(x);
    return std::max(1, order_of_zero(num_, den_, v.value(), z, kLocalDegreeTol));
  }
  const Polynomial pr = num_.reversed(degree_);
  const Polynomial qr = den_.reversed(degree_);
  if (qr.coeff(0) == cplx{0.0, 0.0}) return std::max(1, order_of_zero(qr, 0.0, kLocalDegreeTol));
  const cplx v = pr.coeff(0) / qr.coeff(0);
  return std::max(1, order_of_zero(pr, qr, v, 0.0, kLocalDegreeTol));
}

bool RationalMap::infinity_superattracting() const {
  return num_.degree() >= den_.degree() + 2;
}

ExtComplex eval(const RationalMap& f, ExtComplex z) { return f(z); }

RationalMap derivative(const RationalMap& f) {
  const Polynomial& p = f.num();
  const Polynomial& q = f.den();
  Polynomial n = cross_difference(p.derivative(), q, p, q.derivative());
  if (q.degree() == 0) {
    const cplx q0 = q.coeff(0);
    return RationalMap::unchecked(n.scaled(1.0 / (q0 * q0)), Polynomial::constant(1.0),
                                  f.tolerances());
  }
  Polynomial d = q * q;
  for (const auto& r : poly_roots(q)) {
    const int k = r.multiplicity - 1;
    if (k <= 0) continue;
    if (r.value == cplx{0.0, 0.0}) {
      const int kz = std::min(k, n.low_order_zeros());
      n = n.shift_down(kz);
      d = d.shift_down(kz);
      continue;
    }
    for (int i = 0; i < k; ++i) {
      n = n.deflate(r.value);
      d = d.deflate(r.value);
    }
  }
  return RationalMap::unchecked(std::move(n), std::move(d), f.tolerances());
}

std::vector<CriticalPoint> critical_points(const RationalMap& f, const RootOptions& opts) {
  std::vector<CriticalPoint> out;
  const RationalMap df = derivative(f);
  if (df.num().degree() >= 1) {
    for (const auto& r : poly_roots(df.num(), opts)) {
      out.push_back({ExtComplex(r.value), r.multiplicity + 1});
    }
  }
  if (f.den().degree() >= 1) {
    for (const auto& r : poly_roots(f.den(), opts)) {
      if (r.multiplicity >= 2) out.push_back({ExtComplex(r.value), r.multiplicity});
    }
  }
  const int ld_inf = f.local_degree(ExtComplex::infinity());
  if (ld_inf >= 2) out.push_back({ExtComplex::infinity(), ld_inf});
  std::stable_sort(out.begin(), out.end(), [](const CriticalPoint& a, const CriticalPoint& b) {
    return less_ext(a.point, b.point);
  });
  return out;
}

ExtComplex iterate(const RationalMap& f, ExtComplex z, int n) {
  for (int i = 0; i < n; ++i) z = f(z);
  return z;
}

cplx cycle_multiplier(const RationalMap& f, const std::vector<ExtComplex>& points) {
  cplx m{1.0, 0.0};
  for (const auto& x : points) m *= f.chart_derivative(x);
  return m;
}

bool cycle_closes(const RationalMap& f, const Cycle& c, double tol) {
  const size_t n = c.points.size();
  for (size_t i = 0; i < n; ++i) {
    if (chordal_distance(f(c.points[i]), c.points[(i + 1) % n]) > tol) return false;
  }
  return true;
}

namespace {

// Newton on f^p(z) - z evaluated pointwise; stops when the residual stops shrinking.
cplx refine_periodic(const RationalMap& f, cplx z, int p) {
  auto residual = [&](cplx x, cplx* deriv) -> std::optional<cplx> {
    cplx d{1.0, 0.0};
    ExtComplex y(x);
    for (int i = 0; i < p; ++i) {
      if (y.is_infinite()) return std::nullopt;
      const ExtComplex next = f(y);
      if (next.is_infinite()) return std::nullopt;
      d *= f.derivative_at(y.value());
      y = next;
    }
    if (deriv) *deriv = d - 1.0;
    return y.value() - x;
  };
  for (int it = 0; it < 8; ++it) {
    cplx g1;
    const auto g = residual(z, &g1);
    if (!g || g1 == cplx{0.0, 0.0}) break;
    const cplx next = z - *g / g1;
    const auto gn = residual(next, nullptr);
    if (!gn || !(std::abs(*gn) < std::abs(*g))) break;
    z = next;
  }
  return z;
}

}  // namespace

std::vector<Cycle> periodic_points(const RationalMap& f, int p, const PeriodicOptions& opts) {
  if (p < 1) throw Error("periodic_points: period must be >= 1");
  const int d = f.degree();
  double dp = 1.0;
  for (int i = 0; i < p; ++i) dp *= d;
  if (p > opts.max_period || dp > opts.degree_cap) {
    throw PeriodTooLargeError("periodic_points: degree " + std::to_string(d) + "^" +
                              std::to_string(p) + " exceeds the root-finder cap " +
                              std::to_string(opts.degree_cap));
  }
  // Homogeneous composition: (A, B) represents f^k with homogeneous degree d^k.
  Polynomial a{0.0, 1.0};
  Polynomial b = Polynomial::constant(1.0);
  for (int step = 0; step < p; ++step) {
    std::vector<Polynomial> pa(static_cast<size_t>(d) + 1);
    std::vector<Polynomial> pb(static_cast<size_t>(d) + 1);
    pa[0] = Polynomial::constant(1.0);
    pb[0] = Polynomial::constant(1.0);
    for (int i = 1; i <= d; ++i) {
      pa[i] = pa[i - 1] * a;
      pb[i] = pb[i - 1] * b;
    }
    Polynomial na;
    Polynomial nb;
    for (int i = 0; i <= d; ++i) {
      const Polynomial term = pa[i] * pb[d - i];
      if (f.num().coeff(i) != cplx{0.0, 0.0}) na = na + term.scaled(f.num().coeff(i));
      if (f.den().coeff(i) != cplx{0.0, 0.0}) nb = nb + term.scaled(f.den().coeff(i));
    }
    const double s = std::max(na.max_norm(), nb.max_norm());
    a = na.scaled(1.0 / s);
    b = nb.scaled(1.0 / s);
  }
  const int hom_degree = static_cast<int>(dp) + 1;
  const Polynomial g = cross_difference(a, Polynomial::constant(1.0), Polynomial{0.0, 1.0}, b);

  std::vector<ExtComplex> candidates;
  if (g.degree() >= 1) {
    for (const auto& r : poly_roots(g, opts.roots)) {
      const cplx z = r.multiplicity == 1 ? refine_periodic(f, r.value, p) : r.value;
      candidates.emplace_back(z);
    }
  }
  if (g.degree() < hom_degree) candidates.push_back(ExtComplex::infinity());

  const double tol = f.tolerances().cycle;
  std::vector<char> used(candidates.size(), 0);
  std::vector<Cycle> cycles;
  for (size_t i = 0; i < candidates.size(); ++i) {
    if (used[i]) continue;
    const ExtComplex z0 = candidates[i];
    std::vector<ExtComplex> orbit{z0};
    bool lower = false;
    ExtComplex z = z0;
    for (int k = 1; k <= p; ++k) {
      z = f(z);
      if (k < p) {
        if (chordal_distance(z, z0) <= tol) {
          lower = true;
          break;
        }
        orbit.push_back(z);
      }
    }
    if (lower) continue;
    if (chordal_distance(z, z0) > std::max(tol, 1e-7)) continue;
    for (size_t j = i; j < candidates.size(); ++j) {
      for (const auto& o : orbit) {
        if (chordal_distance(candidates[j], o) <= 1e-6) used[j] = 1;
      }
    }
    // Canonical starting point: the smallest orbit point.
    const auto first = std::min_element(orbit.begin(), orbit.end(), less_ext);
    std::rotate(orbit.begin(), first, orbit.end());
    Cycle c;
    c.period = p;
    c.multiplier = cycle_multiplier(f, orbit);
    c.points = std::move(orbit);
    cycles.push_back(std::move(c));
  }
  std::sort(cycles.begin(), cycles.end(),
            [](const Cycle& x, const Cycle& y) { return less_ext(x.points[0], y.points[0]); });
  return cycles;
}

std::vector<ExtComplex> preimages(const RationalMap& f, ExtComplex w, const RootOptions& opts) {
  const int d = f.degree();
  Polynomial g;
  if (w.is_infinite()) {
    g = f.den();
  } else {
    g = cross_difference(f.num(), Polynomial::constant(1.0), f.den(), Polynomial::constant(w.value()));
  }
  std::vector<ExtComplex> out;
  if (g.degree() >= 1) {
    for (const auto& z : expand(poly_roots(g, opts))) out.emplace_back(z);
  }
  const int at_infinity = d - std::max(g.degree(), 0);
  for (int i = 0; i < at_infinity; ++i) out.push_back(ExtComplex::infinity());
  return out;
}

std::string to_string(ExtComplex z) {
  if (z.is_infinite()) return "inf";
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.17g%+.17gi", z.value().real(), z.value().imag());
  return buf;
}

}  // namespace bubbles

#include "bubbles/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <numbers>

#include "bubbles/errors.hpp"
#include "kernels/orbit_kernel.hpp"

namespace bubbles {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Plane radius around z that corresponds to chordal radius eps (first order).
double plane_radius(cplx z, double eps) { return 0.5 * eps * (1.0 + std::norm(z)); }

bool same_cycle(const Cycle& a, const Cycle& b) {
  if (a.period != b.period) return false;
  for (const auto& x : a.points) {
    bool hit = false;
    for (const auto& y : b.points) hit = hit || chordal_distance(x, y) <= 1e-7;
    if (!hit) return false;
  }
  return true;
}

// f^p and its derivative at a finite point; nullopt if the orbit meets infinity.
std::optional<std::pair<cplx, cplx>> iterate_with_derivative(const RationalMap& f, cplx z, int p) {
  cplx d{1.0, 0.0};
  for (int i = 0; i < p; ++i) {
    if (f.near_pole(z)) return std::nullopt;
    const ExtComplex w = f(ExtComplex(z));
    if (w.is_infinite()) return std::nullopt;
    d *= f.derivative_at(z);
    z = w.value();
  }
  return std::make_pair(z, d);
}

// Newton on f^p(z) - z.
cplx newton_periodic(const RationalMap& f, cplx z, int p) {
  for (int it = 0; it < 60; ++it) {
    const auto r = iterate_with_derivative(f, z, p);
    if (!r) break;
    const cplx g = r->first - z;
    const cplx dg = r->second - 1.0;
    if (dg == cplx{0.0, 0.0}) break;
    const cplx next = z - g / dg;
    if (!std::isfinite(next.real()) || !std::isfinite(next.imag())) break;
    const double step = std::abs(next - z);
    z = next;
    if (step <= 1e-15 * (1.0 + std::abs(z))) break;
  }
  return z;
}

std::optional<Cycle> cycle_through(const RationalMap& f, cplx z, int p, double tol) {
  // Smallest k with f^k(z) back at z.
  ExtComplex w(z);
  std::vector<ExtComplex> pts{w};
  for (int k = 1; k <= p; ++k) {
    w = f(w);
    if (chordal_distance(w, ExtComplex(z)) <= tol) {
      Cycle c;
      c.period = k;
      c.multiplier = cycle_multiplier(f, pts);
      c.points = std::move(pts);
      return c;
    }
    pts.push_back(w);
  }
  return std::nullopt;
}

double circle_max(const RationalMap& f, cplx center, double r, int p) {
  double worst = 0.0;
  for (int s = 0; s < 64; ++s) {
    const cplx z = center + std::polar(r, 2.0 * std::numbers::pi * s / 64.0);
    ExtComplex w(z);
    for (int i = 0; i < p; ++i) w = f(w);
    if (w.is_infinite()) return kInf;
    worst = std::max(worst, std::abs(w.value() - center));
    if (!std::isfinite(worst)) return kInf;
  }
  return worst;
}

}  // namespace

bool AttractorSet::has_parabolic() const {
  return std::any_of(cycles.begin(), cycles.end(),
                     [](const Attractor& a) { return a.kind == CycleKind::Parabolic; });
}

std::string to_string(FateKind k) {
  switch (k) {
    case FateKind::Escape:
      return "Escape";
    case FateKind::Attracted:
      return "Attracted";
    case FateKind::Parabolic:
      return "Parabolic";
    case FateKind::Undecided:
      return "Undecided";
  }
  return "Undecided";
}

std::string to_string(CycleKind k) {
  switch (k) {
    case CycleKind::Superattracting:
      return "superattracting";
    case CycleKind::Attracting:
      return "attracting";
    case CycleKind::Parabolic:
      return "parabolic";
  }
  return "attracting";
}

std::optional<CycleKind> classify_multiplier(cplx m, const DynamicsOptions& opts, int* root_order) {
  const double a = std::abs(m);
  if (a <= opts.super_tol) return CycleKind::Superattracting;
  if (a < 1.0 - opts.parabolic_tol) return CycleKind::Attracting;
  for (int q = 1; q <= opts.max_root_order; ++q) {
    for (int k = 0; k < q; ++k) {
      if (std::abs(m - std::polar(1.0, 2.0 * std::numbers::pi * k / q)) <= opts.parabolic_tol) {
        if (root_order) *root_order = q;
        return CycleKind::Parabolic;
      }
    }
  }
  return std::nullopt;
}

std::optional<double> escape_radius(const RationalMap& f) {
  if (!f.infinity_superattracting()) return std::nullopt;
  if (f.is_polynomial()) {
    const Polynomial p = f.num().scaled(1.0 / f.den().coeff(0));
    const int d = p.degree();
    const double lead = std::abs(p.lead());
    double s = 0.0;
    for (int i = 0; i < d; ++i) s += std::abs(p.coeff(i)) / lead;
    // |f(z)| >= |c_d||z|^d (1 - s/|z|) >= 2|z| once |z| >= 2s and |z|^(d-1) >= 4/|c_d|.
    return std::max({4.0, 1.0 + s, 2.0 * s, std::pow(4.0 / lead, 1.0 / (d - 1))});
  }
  const Polynomial& p = f.num();
  const Polynomial& q = f.den();
  const int n = p.degree();
  auto lower_ok = [&](double r) {
    double rest = 0.0;
    for (int i = 0; i < n; ++i) rest += std::abs(p.coeff(i)) * std::pow(r, i);
    const double num = std::abs(p.lead()) * std::pow(r, n) - rest;
    return num >= 2.0 * r * q.abs_scale(r);
  };
  double r = 4.0;
  for (int it = 0; it < 200; ++it, r *= 2.0) {
    bool ok = true;
    for (int j = 0; j <= 10 && ok; ++j) ok = lower_ok(r * std::ldexp(1.0, j));
    if (ok) return r;
  }
  throw NoConvergenceError("escape_radius: no radius found");
}

AttractorSet find_attractors(const FamilyInstance& inst, int budget, const DynamicsOptions& opts) {
  return find_attractors(inst.map, inst.known_cycles, inst.known_critical, budget, opts);
}

AttractorSet find_attractors(const RationalMap& f, const std::vector<Cycle>& known,
                             const std::vector<ExtComplex>& critical, int budget,
                             const DynamicsOptions& opts) {
  AttractorSet set;
  set.escape_radius = escape_radius(f);
  const double tol = f.tolerances().cycle;

  auto add = [&](const Cycle& c) {
    if (!cycle_closes(f, c, std::max(tol, 1e-7))) return;
    for (const auto& a : set.cycles) {
      if (same_cycle(a.cycle, c)) return;
    }
    int q = 1;
    const auto kind = classify_multiplier(c.multiplier, opts, &q);
    if (!kind) return;
    Attractor a;
    a.cycle = c;
    a.kind = *kind;
    a.root_order = q;
    set.cycles.push_back(std::move(a));
  };

  for (const auto& c : known) add(c);
  if (set.escape_radius) {
    Cycle inf;
    inf.points = {ExtComplex::infinity()};
    inf.period = 1;
    inf.multiplier = 0.0;
    add(inf);
  }

  // Cycles that capture critical orbits.
  std::vector<ExtComplex> crit = critical;
  for (const auto& c : critical_points(f)) crit.push_back(c.point);
  const double r2 = set.escape_radius ? *set.escape_radius * *set.escape_radius : kInf;
  constexpr int kMaxPeriod = 12;
  for (const auto& c0 : crit) {
    if (c0.is_infinite()) continue;
    std::vector<cplx> hist;
    ExtComplex z = c0;
    for (int n = 0; n < budget; ++n) {
      z = f(z);
      if (z.is_infinite() || std::norm(z.value()) > r2) break;
      const cplx w = z.value();
      hist.push_back(w);
      bool found = false;
      for (int p = 1; p <= kMaxPeriod && p < static_cast<int>(hist.size()); ++p) {
        const cplx prev = hist[hist.size() - 1 - p];
        if (std::abs(w - prev) > 1e-9 * (1.0 + std::abs(w))) continue;
        const cplx refined = newton_periodic(f, w, p);
        if (auto cyc = cycle_through(f, refined, p, 1e-8)) {
          int q = 1;
          const auto kind = classify_multiplier(cyc->multiplier, opts, &q);
          if (kind && *kind != CycleKind::Parabolic) add(*cyc);
        }
        found = true;
        break;
      }
      if (found) break;
    }
  }

  // Parabolic (and any other non-repelling) cycles of low period.
  for (int p = 1; p <= 4; ++p) {
    if (std::pow(f.degree(), p) > 128.0) break;
    try {
      for (const auto& c : periodic_points(f, p)) add(c);
    } catch (const NoConvergenceError&) {
    }
  }

  // Trap radii for finite attracting points.
  for (size_t ci = 0; ci < set.cycles.size(); ++ci) {
    Attractor& a = set.cycles[ci];
    a.trap_radius.assign(a.cycle.points.size(), 0.0);
    if (a.kind == CycleKind::Parabolic) continue;
    const double kappa = 0.5 * (1.0 + std::abs(a.cycle.multiplier));
    for (size_t k = 0; k < a.cycle.points.size(); ++k) {
      const ExtComplex pt = a.cycle.points[k];
      if (pt.is_infinite()) continue;
      const cplx c = pt.value();
      double r = 0.25 * (1.0 + std::abs(c));
      for (size_t cj = 0; cj < set.cycles.size(); ++cj) {
        for (const auto& other : set.cycles[cj].cycle.points) {
          if (other.is_infinite() || (cj == ci && other == pt)) continue;
          r = std::min(r, 0.5 * std::abs(other.value() - c));
        }
      }
      const double floor = 1e-9 * (1.0 + std::abs(c));
      while (r > floor && !(circle_max(f, c, r, a.cycle.period) <= kappa * r)) r *= 0.5;
      a.trap_radius[k] = std::max(r, floor);
    }
  }
  // Local model of superattracting cycles, used by the interior distance estimate.
  for (auto& a : set.cycles) {
    if (a.kind != CycleKind::Superattracting) continue;
    bool finite = true;
    int k = 1;
    for (const auto& pt : a.cycle.points) {
      finite = finite && pt.is_finite();
      k *= f.local_degree(pt);
    }
    if (!finite || k < 2) continue;
    a.local_degree = k;
    a.bottcher_scale.assign(a.cycle.points.size(), 0.0);
    for (size_t j = 0; j < a.cycle.points.size(); ++j) {
      const cplx c = a.cycle.points[j].value();
      const double t = 1e-3 * std::min(a.trap_radius[j], 1.0 + std::abs(c));
      double sum = 0.0;
      int n = 0;
      for (int s = 0; s < 8; ++s) {
        const cplx w = std::polar(t, 2.0 * std::numbers::pi * s / 8.0);
        const auto z = iterate_with_derivative(f, c + w, a.cycle.period);
        if (!z) continue;
        sum += std::log(std::abs(z->first - c)) - k * std::log(t);
        ++n;
      }
      if (n > 0) a.bottcher_scale[j] = std::exp(sum / n / (k - 1));
    }
  }
  for (size_t i = 0; i < set.cycles.size(); ++i) {
    if (set.cycles[i].cycle.points[0].is_infinite() && set.cycles[i].cycle.period == 1) {
      set.infinity_index = static_cast<int>(i);
    }
  }
  return set;
}

// -------------------------------------------------------------------------
// Classification

bool avx2_available() {
  if (!kernels::avx2_compiled()) return false;
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2");
}

Kernel resolve_kernel(Kernel k) {
  if (k == Kernel::Auto) {
    if (const char* env = std::getenv("BUBBLES_KERNEL")) {
      if (std::strcmp(env, "scalar") == 0) return Kernel::Scalar;
      if (std::strcmp(env, "avx2") == 0 && avx2_available()) return Kernel::Avx2;
    }
    return avx2_available() ? Kernel::Avx2 : Kernel::Scalar;
  }
  if (k == Kernel::Avx2 && !avx2_available()) return Kernel::Scalar;
  return k;
}

struct Target {
  int cycle;
  int point;
  bool parabolic;
  double radius;  // trap radius (attracting) or plane radius of the check ball
};

struct OrbitClassifier::Impl {
  RationalMap f;
  AttractorSet set;
  DynamicsOptions opts;
  kernels::OrbitProgram prog;
  std::vector<Target> targets;
  size_t n_attracting = 0;

  Impl(const RationalMap& map, const AttractorSet& s, const DynamicsOptions& o) : f(map), set(s), opts(o) {
    Polynomial p = f.num();
    if (f.is_polynomial()) {
      p = p.scaled(1.0 / f.den().coeff(0));
      prog.polynomial = true;
    } else {
      prog.polynomial = false;
    }
    for (int i = p.degree(); i >= 0; --i) {
      prog.pr.push_back(p.coeff(i).real());
      prog.pi.push_back(p.coeff(i).imag());
    }
    if (!prog.polynomial) {
      for (int i = f.den().degree(); i >= 0; --i) {
        prog.qr.push_back(f.den().coeff(i).real());
        prog.qi.push_back(f.den().coeff(i).imag());
      }
    }
    if (set.escape_radius) prog.escape_r2 = *set.escape_radius * *set.escape_radius;
    for (int pass = 0; pass < 2; ++pass) {
      for (size_t ci = 0; ci < set.cycles.size(); ++ci) {
        const Attractor& a = set.cycles[ci];
        const bool para = a.kind == CycleKind::Parabolic;
        if (para != (pass == 1)) continue;
        for (size_t k = 0; k < a.cycle.points.size(); ++k) {
          const ExtComplex pt = a.cycle.points[k];
          if (pt.is_infinite()) continue;
          const double r = para ? plane_radius(pt.value(), opts.parabolic_eps) : a.trap_radius[k];
          if (!(r > 0.0)) continue;
          targets.push_back({static_cast<int>(ci), static_cast<int>(k), para, r});
          const double stop = para ? r : 0.5 * r;
          prog.tr.push_back(pt.value().real());
          prog.ti.push_back(pt.value().imag());
          prog.tr2.push_back(stop * stop);
        }
      }
      if (pass == 0) n_attracting = targets.size();
    }
  }

  cplx cycle_point(int ci, int k) const { return set.cycles[ci].cycle.points[k].value(); }

  OrbitFate finish(kernels::WanderState st, int budget) const;
};

OrbitFate OrbitClassifier::Impl::finish(kernels::WanderState st, int budget) const {
  using namespace kernels;
  OrbitFate out;
  double zr = st.zr, zi = st.zi, dr = st.dr, di = st.di;
  int iter = st.iter;
  std::int32_t ev = st.event;
  std::int32_t target = st.target;
  // Iterations before which parabolic targets are ignored (after a failed check).
  int parabolic_quiet_until = -1;

  for (;;) {
    if (ev == kEscape || (ev == kNonFinite && set.escape_radius && !std::isnan(zr) && !std::isnan(zi))) {
      out.kind = FateKind::Escape;
      out.attractor = set.infinity_index;
      out.iterations = iter;
      if (ev == kNonFinite) {
        out.final_point = ExtComplex::infinity();
        out.boundary_distance = kInf;
        return out;
      }
      out.final_point = ExtComplex(cplx(zr, zi));
      // Push further out so the asymptotic distance estimate is accurate.
      double xr = zr, xi = zi, er = dr, ei = di;
      for (int extra = 0; extra < 64 && xr * xr + xi * xi < 1e16; ++extra) {
        double yr = xr, yi = xi, fr = er, fi = ei;
        step(prog, yr, yi, fr, fi);
        if (!(yr * yr + yi * yi <= kFiniteLimit) || !std::isfinite(fr) || !std::isfinite(fi)) break;
        xr = yr;
        xi = yi;
        er = fr;
        ei = fi;
      }
      const double m = std::hypot(xr, xi);
      const double dm = std::hypot(er, ei);
      double de = dm == 0.0 ? kInf : 0.5 * m * std::log(m) / dm;
      if (std::isnan(de)) de = 0.0;
      out.boundary_distance = de;
      return out;
    }
    if (ev == kNonFinite || ev == kBudget) {
      out.kind = FateKind::Undecided;
      out.iterations = iter;
      out.final_point = ExtComplex(cplx(zr, zi));
      out.boundary_distance = 0.0;
      return out;
    }
    // Trap.
    const Target& t = targets[static_cast<size_t>(target)];
    const Attractor& a = set.cycles[t.cycle];
    const int p = a.cycle.period;
    const int phase = ((t.point - iter) % p + p) % p;
    if (!t.parabolic) {
      const cplx c = cycle_point(t.cycle, t.point);
      const double dz = std::hypot(dr, di);
      const double gap = t.radius - std::abs(cplx(zr, zi) - c);
      double de = dz == 0.0 ? kInf : 0.25 * gap / dz;
      if (std::isnan(de)) de = 0.0;
      int k = t.point;
      int extra = 0;
      while (chordal_distance(ExtComplex(cplx(zr, zi)), ExtComplex(cycle_point(t.cycle, k))) >= opts.trap_eps &&
             extra < 100000) {
        step(prog, zr, zi, dr, di);
        k = (k + 1) % p;
        ++iter;
        ++extra;
      }
      const int reached = iter;
      const cplx reached_z(zr, zi);
      if (!a.bottcher_scale.empty()) {
        // Green's function of the superattracting basin:
        // G = k^-n log(1 / (s |w_n|)), distance ~ G / (2 |grad G|).
        const double w = std::abs(reached_z - cycle_point(t.cycle, k));
        const double sw = a.bottcher_scale[k] * w;
        const double dz2 = std::hypot(dr, di);
        if (w == 0.0 || dz2 == 0.0) {
          de = kInf;
        } else if (sw > 0.0 && sw < 1.0) {
          // The Green estimate vanishes at the attractor and its preimages,
          // where the trap-entry bound is the better one.
          const double g = 0.5 * w * std::log(1.0 / sw) / dz2;
          if (!std::isnan(g)) de = std::max(de, g);
        }
      }
      // Only the return map is contracting; intermediate points may drift.
      for (int j = 0; j < p; ++j) step(prog, zr, zi, dr, di);
      const bool stays =
          chordal_distance(ExtComplex(cplx(zr, zi)), ExtComplex(cycle_point(t.cycle, k))) < opts.trap_eps;
      if (!stays) {
        out.kind = FateKind::Undecided;
        out.iterations = reached;
        out.final_point = ExtComplex(reached_z);
        return out;
      }
      out.kind = FateKind::Attracted;
      out.attractor = t.cycle;
      out.phase = phase;
      out.iterations = reached;
      out.final_point = ExtComplex(reached_z);
      out.boundary_distance = de;
      return out;
    }

    // Parabolic check: monotone approach under the return map over W returns at
    // a sub-geometric rate.
    const int ret = p * a.root_order;
    const cplx c = cycle_point(t.cycle, t.point);
    double xr = zr, xi = zi, er = dr, ei = di;
    int n = iter;
    const double d0 = std::abs(cplx(xr, xi) - c);
    double prev = d0;
    bool monotone = true;
    for (int w = 0; w < opts.parabolic_window && monotone; ++w) {
      for (int s = 0; s < ret; ++s) step(prog, xr, xi, er, ei);
      n += ret;
      const double d = std::abs(cplx(xr, xi) - c);
      monotone = d < prev;
      prev = d;
    }
    const double floor_ratio = std::pow(1.0 - opts.parabolic_rate, opts.parabolic_window);
    if (monotone && d0 > 0.0 && prev / d0 > floor_ratio &&
        chordal_distance(ExtComplex(cplx(xr, xi)), ExtComplex(c)) < opts.parabolic_eps) {
      out.kind = FateKind::Parabolic;
      out.attractor = t.cycle;
      out.phase = phase;
      out.iterations = n;
      out.final_point = ExtComplex(cplx(xr, xi));
      const double dz = std::hypot(er, ei);
      double de = dz == 0.0 ? kInf : 0.125 * prev / dz;
      if (std::isnan(de)) de = 0.0;
      out.boundary_distance = de;
      return out;
    }
    if (n >= budget) {
      ev = kBudget;
      zr = xr;
      zi = xi;
      dr = er;
      di = ei;
      iter = n;
      continue;
    }
    // Resume wandering from the original point with parabolic targets muted
    // for one window.
    parabolic_quiet_until = iter + opts.parabolic_window * ret;
    ev = kNone;
    while (ev == kNone) {
      ev = check(prog, zr, zi, &target);
      if (ev == kTrap && static_cast<size_t>(target) >= n_attracting && iter < parabolic_quiet_until) {
        ev = kNone;
        // Any attracting target still takes precedence.
        for (size_t tt = 0; tt < n_attracting; ++tt) {
          const double ddx = zr - prog.tr[tt];
          const double ddy = zi - prog.ti[tt];
          if (ddx * ddx + ddy * ddy < prog.tr2[tt]) {
            ev = kTrap;
            target = static_cast<std::int32_t>(tt);
            break;
          }
        }
      }
      if (ev != kNone) break;
      if (iter >= budget) {
        ev = kBudget;
        break;
      }
      step(prog, zr, zi, dr, di);
      ++iter;
    }
  }
}

OrbitClassifier::OrbitClassifier(const RationalMap& f, const AttractorSet& attractors, int budget,
                                 const DynamicsOptions& opts)
    : impl_(std::make_unique<Impl>(f, attractors, opts)), budget_(budget) {}

OrbitClassifier::~OrbitClassifier() = default;

OrbitFate OrbitClassifier::classify(ExtComplex z0) const {
  if (z0.is_infinite()) {
    if (impl_->set.escape_radius) {
      OrbitFate out;
      out.kind = FateKind::Escape;
      out.attractor = impl_->set.infinity_index;
      out.final_point = z0;
      out.boundary_distance = kInf;
      return out;
    }
    const ExtComplex z1 = impl_->f(z0);
    if (z1.is_infinite()) return OrbitFate{FateKind::Undecided, -1, 0, 0, z0, 0.0};
    OrbitFate out = classify(z1);
    out.iterations += 1;
    out.phase = out.attractor >= 0 ? (out.phase + impl_->set.cycles[out.attractor].cycle.period - 1) %
                                         impl_->set.cycles[out.attractor].cycle.period
                                   : 0;
    out.boundary_distance = 0.0;
    return out;
  }
  OrbitFate out;
  const cplx z = z0.value();
  classify_batch(&z, 1, &out, Kernel::Scalar);
  return out;
}

void OrbitClassifier::classify_batch(const cplx* seeds, std::size_t n, OrbitFate* out, Kernel kernel) const {
  std::vector<kernels::WanderState> st(n);
  for (std::size_t i = 0; i < n; ++i) {
    st[i] = kernels::WanderState{seeds[i].real(), seeds[i].imag(), 1.0, 0.0, 0, 0, -1, 0};
  }
  if (resolve_kernel(kernel) == Kernel::Avx2) {
    kernels::wander_avx2(impl_->prog, st.data(), n, budget_);
  } else {
    kernels::wander_scalar(impl_->prog, st.data(), n, budget_);
  }
  for (std::size_t i = 0; i < n; ++i) out[i] = impl_->finish(st[i], budget_);
}

OrbitFate classify_orbit(const RationalMap& f, ExtComplex z0, const AttractorSet& attractors, int budget,
                         const DynamicsOptions& opts) {
  return OrbitClassifier(f, attractors, budget, opts).classify(z0);
}

std::vector<CriticalFate> critical_orbit_fates(const FamilyInstance& inst, const AttractorSet& attractors,
                                               int budget, const DynamicsOptions& opts) {
  const OrbitClassifier cls(inst.map, attractors, budget, opts);
  std::vector<CriticalFate> out;
  for (const auto& c : critical_points(inst.map)) {
    out.push_back({c.point, c.local_degree, cls.classify(c.point)});
  }
  return out;
}

double potential(const RationalMap& f, cplx z, int k_max) {
  if (!f.is_polynomial()) throw InvalidMapError("potential: map is not a polynomial");
  const int d = f.degree();
  if (d < 2) throw InvalidMapError("potential: degree must be >= 2");
  const double lead = std::abs(f.num().lead() / f.den().coeff(0));
  constexpr double kBig = 1e30;
  ExtComplex w(z);
  int k = 0;
  while (k < k_max && w.is_finite() && std::abs(w.value()) <= kBig) {
    w = f(w);
    ++k;
  }
  if (w.is_infinite() || std::abs(w.value()) <= kBig) return 0.0;
  const double g = (std::log(std::abs(w.value())) + std::log(lead) / (d - 1)) / std::pow(d, k);
  return std::max(g, 0.0);
}

}  // namespace bubbles

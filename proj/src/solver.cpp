#include "bubbles/solver.hpp"

#include <cmath>
#include <sstream>

#include "bubbles/errors.hpp"

namespace bubbles {

namespace {

// f_v^p(1) - 1 by direct iteration; huge values stay finite enough for Newton.
cplx residual_map(int p, cplx v) {
  cplx z = 1.0;
  for (int k = 0; k < p; ++k) z = z * z * z - 3.0 * z + v;
  return z - 1.0;
}

int moebius(int n) {
  int mu = 1;
  for (int q = 2; q * q <= n; ++q) {
    if (n % q != 0) continue;
    n /= q;
    if (n % q == 0) return 0;
    mu = -mu;
  }
  return n > 1 ? -mu : mu;
}

// Residual with the roots of lower periods divided out:
// prod over d | p of residual_map(d)^mu(p/d).
cplx deflated(int p, cplx v) {
  cplx h = 1.0;
  for (int d = 1; d <= p; ++d) {
    if (p % d != 0) continue;
    const int mu = moebius(p / d);
    if (mu == 1) h *= residual_map(d, v);
    if (mu == -1) h /= residual_map(d, v);
  }
  return h;
}

std::string show(cplx v) { return to_string(ExtComplex(v)); }

}  // namespace

SuperattractingCheck verify_superattracting(const RationalMap& f, ExtComplex point, int p, double tol) {
  SuperattractingCheck out;
  if (p < 1) return out;
  std::vector<ExtComplex> orbit{point};
  ExtComplex z = point;
  for (int k = 1; k <= p; ++k) {
    z = f(z);
    if (chordal_distance(z, point) <= tol) {
      out.exact_period = k;
      break;
    }
    orbit.push_back(z);
  }
  if (out.exact_period == 0) return out;
  out.multiplier = cycle_multiplier(f, orbit);
  out.ok = out.exact_period == p && std::abs(out.multiplier) <= tol;
  return out;
}

SolveResult solve_superattracting(int p, cplx v0, const SolveOptions& opts) {
  if (p < 1) throw NoConvergenceError("period must be at least 1");
  cplx v = v0;
  cplx g = residual_map(p, v);
  cplx h = deflated(p, v);
  int iters = 0;
  bool converged = std::abs(g) <= opts.tol;
  while (iters < opts.max_iters && !converged) {
    const double step_h = 1e-7 * (1.0 + std::abs(v));
    const cplx dh = (deflated(p, v + step_h) - deflated(p, v - step_h)) / (2.0 * step_h);
    if (dh == 0.0 || !std::isfinite(std::abs(dh))) break;
    cplx step = h / dh;
    ++iters;
    bool improved = false;
    for (int halvings = 0; halvings < 40; ++halvings) {
      const cplx h_new = deflated(p, v - step);
      if (std::abs(h_new) < std::abs(h)) {
        v -= step;
        h = h_new;
        improved = true;
        break;
      }
      step *= 0.5;
    }
    g = residual_map(p, v);
    converged = std::abs(g) <= opts.tol;
    if (!improved) break;
  }
  // A few undamped polishing steps once at the root's doorstep.
  for (int k = 0; k < 3 && converged && std::abs(g) > 0.0; ++k) {
    const double step_h = 1e-7 * (1.0 + std::abs(v));
    const cplx dh = (deflated(p, v + step_h) - deflated(p, v - step_h)) / (2.0 * step_h);
    const cplx cand = v - deflated(p, v) / dh;
    const cplx g_new = residual_map(p, cand);
    if (!(std::abs(g_new) < std::abs(g))) break;
    v = cand;
    g = g_new;
  }
  if (!converged) {
    std::ostringstream os;
    os << "Newton for period " << p << " from " << show(v0) << " stalled at " << show(v) << " with residual "
       << std::abs(g) << " after " << iters << " iterations";
    throw NoConvergenceError(os.str());
  }

  const auto inst = make_family("solver_cubic", {{"v", v}});
  const auto check = verify_superattracting(inst.map, ExtComplex(1.0), p);
  if (!check.ok) {
    std::ostringstream os;
    os << "parameter " << show(v) << " gives exact period " << check.exact_period << ", not " << p;
    throw WrongPeriodError(os.str());
  }

  SolveResult r;
  r.parameter = v;
  r.residual = std::abs(g);
  r.newton_iters = iters;
  r.cycle.period = p;
  ExtComplex z(1.0);
  for (int k = 0; k < p; ++k) {
    r.cycle.points.push_back(z);
    z = inst.map(z);
  }
  r.cycle.multiplier = check.multiplier;
  const AttractorSet set = find_attractors(inst, opts.budget, opts.criterion.render.dynamics);
  r.other_critical_fate = classify_orbit(inst.map, ExtComplex(-1.0), set, opts.budget, opts.criterion.render.dynamics);
  if (opts.check_criterion) {
    const Window w = fit_window(inst.map, set, opts.budget, opts.resolution);
    r.window = w;
    r.verdict = run_criterion(inst, w, opts.budget, opts.criterion).verdict;
  }
  return r;
}

}  // namespace bubbles

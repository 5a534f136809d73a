#include "bubbles/roots.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "bubbles/errors.hpp"

namespace bubbles {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Newton {
  cplx ratio;        // p(z) / p'(z)
  double backward;   // |p(z)| / sum |c_i||z|^i
};

// p/p' and the backward error at z. For |z| > 1 the reversed polynomial is used
// so that high degrees do not overflow.
Newton newton_ratio(const std::vector<cplx>& c, cplx z) {
  const int n = static_cast<int>(c.size()) - 1;
  if (std::abs(z) <= 1.0) {
    cplx p = c[n];
    cplx dp{0.0, 0.0};
    double s = std::abs(c[n]);
    const double r = std::abs(z);
    for (int i = n - 1; i >= 0; --i) {
      dp = dp * z + p;
      p = p * z + c[i];
      s = s * r + std::abs(c[i]);
    }
    const double be = s > 0.0 ? std::abs(p) / s : 0.0;
    if (dp == cplx{0.0, 0.0}) return {cplx{0.0, 0.0}, be};
    return {p / dp, be};
  }
  const cplx y = 1.0 / z;
  const double r = std::abs(y);
  cplx q = c[0];
  cplx dq{0.0, 0.0};
  double s = std::abs(c[0]);
  for (int i = 1; i <= n; ++i) {
    dq = dq * y + q;
    q = q * y + c[i];
    s = s * r + std::abs(c[i]);
  }
  const double be = s > 0.0 ? std::abs(q) / s : 0.0;
  // p/p' = 1 / (y (n - y q'/q))
  if (q == cplx{0.0, 0.0}) return {cplx{0.0, 0.0}, 0.0};
  const cplx denom = y * (static_cast<double>(n) - y * dq / q);
  if (denom == cplx{0.0, 0.0}) return {cplx{0.0, 0.0}, be};
  return {1.0 / denom, be};
}

// Initial approximations from the Newton polygon of the monic coefficients.
std::vector<cplx> initial_guesses(const std::vector<cplx>& c, std::uint64_t seed) {
  const int n = static_cast<int>(c.size()) - 1;
  std::vector<std::pair<int, double>> pts;
  for (int i = 0; i <= n; ++i) {
    if (c[i] != cplx{0.0, 0.0}) pts.emplace_back(i, std::log(std::abs(c[i])));
  }
  // Upper convex hull (monotone chain).
  std::vector<std::pair<int, double>> hull;
  for (const auto& p : pts) {
    while (hull.size() >= 2) {
      const auto& a = hull[hull.size() - 2];
      const auto& b = hull.back();
      const double cross = (b.first - a.first) * (p.second - a.second) -
                           (b.second - a.second) * (p.first - a.first);
      if (cross >= 0.0) {
        hull.pop_back();
      } else {
        break;
      }
    }
    hull.push_back(p);
  }
  // Cauchy bound 1 + max |c_i| / |c_n|.
  double cauchy = 0.0;
  for (int i = 0; i < n; ++i) cauchy = std::max(cauchy, std::abs(c[i] / c[n]));
  cauchy += 1.0;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 2.0 * std::numbers::pi);
  std::vector<cplx> z;
  z.reserve(static_cast<size_t>(n));
  for (size_t h = 1; h < hull.size(); ++h) {
    const int k = hull[h].first - hull[h - 1].first;
    double radius = std::exp((hull[h - 1].second - hull[h].second) / k);
    radius = std::min(radius, cauchy);
    const double offset = uni(rng);
    for (int j = 0; j < k; ++j) {
      const double theta = 2.0 * std::numbers::pi * j / k + offset;
      z.push_back(std::polar(radius, theta));
    }
  }
  return z;
}

std::vector<cplx> aberth(const std::vector<cplx>& coeffs, const RootOptions& opts) {
  const int n = static_cast<int>(coeffs.size()) - 1;
  if (n == 1) return {-coeffs[0] / coeffs[1]};
  std::vector<cplx> z = initial_guesses(coeffs, opts.seed);
  std::vector<char> done(static_cast<size_t>(n), 0);
  const double stop_backward = 4.0 * kEps * n;
  int remaining = n;
  for (int sweep = 0; sweep < opts.max_sweeps && remaining > 0; ++sweep) {
    for (int i = 0; i < n; ++i) {
      if (done[i]) continue;
      const Newton nr = newton_ratio(coeffs, z[i]);
      if (nr.backward <= stop_backward) {
        done[i] = 1;
        --remaining;
        continue;
      }
      cplx sum{0.0, 0.0};
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        const cplx d = z[i] - z[j];
        if (d != cplx{0.0, 0.0}) sum += 1.0 / d;
      }
      const cplx w = nr.ratio / (1.0 - nr.ratio * sum);
      if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) {
        // Nudge off a degenerate configuration deterministically.
        z[i] *= cplx{1.0 + 1e-6, 1e-6};
        continue;
      }
      z[i] -= w;
      if (std::abs(w) <= 2.0 * kEps * std::abs(z[i])) {
        done[i] = 1;
        --remaining;
      }
    }
  }
  for (int i = 0; i < n; ++i) {
    const Newton nr = newton_ratio(coeffs, z[i]);
    if (!(nr.backward <= opts.tol.root)) {
      throw NoConvergenceError("poly_roots: root " + std::to_string(i) + " of degree-" +
                               std::to_string(n) + " polynomial has backward error " +
                               std::to_string(nr.backward));
    }
  }
  return z;
}

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

// Single-linkage grouping of root indices at the given (relative) radius.
std::vector<std::vector<int>> group(const std::vector<cplx>& z, const std::vector<int>& idx,
                                    double radius) {
  std::vector<int> parent(idx.size());
  for (size_t i = 0; i < idx.size(); ++i) parent[i] = static_cast<int>(i);
  auto find = [&](int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (size_t i = 0; i < idx.size(); ++i) {
    for (size_t j = i + 1; j < idx.size(); ++j) {
      const cplx a = z[idx[i]];
      const cplx b = z[idx[j]];
      const double scale = std::max({1.0, std::abs(a), std::abs(b)});
      if (std::abs(a - b) < radius * scale) parent[find(static_cast<int>(i))] = find(static_cast<int>(j));
    }
  }
  std::vector<std::vector<int>> out;
  std::vector<int> slot(idx.size(), -1);
  for (size_t i = 0; i < idx.size(); ++i) {
    const int r = find(static_cast<int>(i));
    if (slot[r] < 0) {
      slot[r] = static_cast<int>(out.size());
      out.emplace_back();
    }
    out[slot[r]].push_back(idx[i]);
  }
  return out;
}

cplx mean_of(const std::vector<cplx>& z, const std::vector<int>& g) {
  cplx m{0.0, 0.0};
  for (int i : g) m += z[i];
  return m / static_cast<double>(g.size());
}

bool is_multiple_root(const Polynomial& p, cplx c, int k, double tol) {
  for (int j = 0; j < k; ++j) {
    const double s = derivative_scale(p, c, j);
    if (s == 0.0) continue;
    if (std::abs(p.derivative_at(c, j)) > tol * s) return false;
  }
  return true;
}

// Newton on p^(k-1) sharpens the centre of a k-fold cluster.
cplx polish_multiple(const Polynomial& p, cplx c, int k) {
  for (int it = 0; it < 4; ++it) {
    const cplx f = p.derivative_at(c, k - 1);
    const cplx df = p.derivative_at(c, k);
    if (df == cplx{0.0, 0.0}) break;
    const cplx next = c - f / df;
    if (!(std::abs(p.derivative_at(next, k - 1)) < std::abs(f))) break;
    c = next;
  }
  return c;
}

}  // namespace

std::vector<Root> poly_roots(const Polynomial& p, const RootOptions& opts) {
  if (p.degree() < 1) throw Error("poly_roots: polynomial must have degree >= 1");
  std::vector<Root> out;
  std::vector<Root> merged;
  const int zeros = p.low_order_zeros();
  if (zeros > 0) merged.push_back({cplx{0.0, 0.0}, zeros});
  const Polynomial q = p.shift_down(zeros);
  if (q.degree() < 1) return merged;

  std::vector<cplx> monic(q.coeffs());
  const cplx lead = monic.back();
  for (auto& c : monic) c /= lead;
  const std::vector<cplx> z = aberth(monic, opts);

  std::vector<int> all(z.size());
  for (size_t i = 0; i < z.size(); ++i) all[i] = static_cast<int>(i);
  for (const auto& tight : group(z, all, opts.tol.cluster)) {
    if (tight.size() > 1) {
      const int k = static_cast<int>(tight.size());
      out.push_back({polish_multiple(q, mean_of(z, tight), k), k});
      continue;
    }
    out.push_back({z[tight[0]], 1});
  }

  // Second pass: wider clusters confirmed by vanishing derivatives.
  std::vector<int> singles;
  std::vector<cplx> vals;
  for (const auto& r : out) {
    if (r.multiplicity == 1) {
      singles.push_back(static_cast<int>(vals.size()));
      vals.push_back(r.value);
    } else {
      merged.push_back(r);
    }
  }
  for (const auto& g : group(vals, singles, 1e-3)) {
    const int k = static_cast<int>(g.size());
    if (k > 1) {
      const cplx c = polish_multiple(q, mean_of(vals, g), k);
      if (is_multiple_root(q, c, k, opts.multiplicity_check)) {
        merged.push_back({c, k});
        continue;
      }
    }
    for (int i : g) merged.push_back({vals[i], 1});
  }
  std::sort(merged.begin(), merged.end(), [](const Root& a, const Root& b) {
    if (a.value.real() != b.value.real()) return a.value.real() < b.value.real();
    return a.value.imag() < b.value.imag();
  });
  return merged;
}

std::vector<cplx> expand(const std::vector<Root>& roots) {
  std::vector<cplx> out;
  for (const auto& r : roots) {
    for (int i = 0; i < r.multiplicity; ++i) out.push_back(r.value);
  }
  return out;
}

}  // namespace bubbles

#include "bubbles/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>

#include "bubbles/errors.hpp"

namespace bubbles {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double sphere_scale(cplx z) { return std::sqrt(1.0 + std::norm(z)); }

double chordal(cplx a, cplx b) { return 2.0 * std::abs(a - b) / (sphere_scale(a) * sphere_scale(b)); }

double cross(cplx o, cplx a, cplx b) {
  return (a.real() - o.real()) * (b.imag() - o.imag()) - (a.imag() - o.imag()) * (b.real() - o.real());
}

// Convex hull (monotone chain) of the points; collinear points dropped.
std::vector<cplx> hull(std::vector<cplx> p) {
  std::sort(p.begin(), p.end(), [](cplx a, cplx b) {
    return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
  });
  p.erase(std::unique(p.begin(), p.end()), p.end());
  if (p.size() < 3) return p;
  std::vector<cplx> h(2 * p.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], p[i]) <= 0.0) --k;
    h[k++] = p[i];
  }
  for (std::size_t i = p.size() - 1, t = k + 1; i > 0; --i) {
    while (k >= t && cross(h[k - 2], h[k - 1], p[i - 1]) <= 0.0) --k;
    h[k++] = p[i - 1];
  }
  h.resize(k - 1);
  return h;
}

// Chordal diameter of finite points, evaluated on their planar hull.
double hull_diameter(const std::vector<cplx>& pts) {
  const auto h = hull(pts);
  double d = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    for (std::size_t j = i + 1; j < h.size(); ++j) d = std::max(d, chordal(h[i], h[j]));
  }
  return d;
}

std::vector<cplx> vertices(const Curve& c) {
  std::vector<cplx> v = c.points;
  if (v.size() > 1 && v.front() == v.back()) v.pop_back();
  return v;
}

// Sorted copy of a point set for pruned nearest-pair searches.
struct SortedSet {
  std::vector<cplx> pts;  // by real part
  double max_scale = 1.0;

  explicit SortedSet(std::vector<cplx> p) : pts(std::move(p)) {
    std::sort(pts.begin(), pts.end(), [](cplx a, cplx b) { return a.real() < b.real(); });
    for (const cplx z : pts) max_scale = std::max(max_scale, sphere_scale(z));
  }

  // Smallest chordal distance to z, never above `best`.
  double nearest(cplx z, double best) const {
    const double sz = sphere_scale(z);
    const auto mid = std::lower_bound(pts.begin(), pts.end(), z.real(),
                                      [](cplx a, double x) { return a.real() < x; });
    for (auto it = mid; it != pts.end(); ++it) {
      if (2.0 * (it->real() - z.real()) / (sz * max_scale) >= best) break;
      best = std::min(best, chordal(z, *it));
    }
    for (auto it = mid; it != pts.begin();) {
      --it;
      if (2.0 * (z.real() - it->real()) / (sz * max_scale) >= best) break;
      best = std::min(best, chordal(z, *it));
    }
    return best;
  }
};

double set_distance(const std::vector<cplx>& a, const SortedSet& b) {
  double best = kInf;
  for (const cplx z : a) best = b.nearest(z, best);
  return best;
}

}  // namespace

double chordal_diameter(const std::vector<ExtComplex>& pts) {
  double d = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) d = std::max(d, chordal_distance(pts[i], pts[j]));
  }
  return d;
}

double relative_distance(const std::vector<ExtComplex>& a, const std::vector<ExtComplex>& b) {
  const double da = chordal_diameter(a);
  const double db = chordal_diameter(b);
  if (da < 1e-12 || db < 1e-12) throw DegenerateSetError("relative distance needs sets of positive diameter");
  double dist = kInf;
  for (const auto& x : a) {
    for (const auto& y : b) dist = std::min(dist, chordal_distance(x, y));
  }
  return dist / std::min(da, db);
}

double bounded_turning(const Curve& curve, int n_pairs, std::uint64_t seed) {
  const auto v = vertices(curve);
  const std::size_t n = v.size();
  if (n < 64) throw DegenerateComponentError("bounded turning needs a closed curve with at least 64 vertices");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  const double min_gap = 3.0 * curve.pixel_size;
  double worst = 1.0;
  std::vector<cplx> arc1;
  std::vector<cplx> arc2;
  for (int k = 0; k < n_pairs; ++k) {
    std::size_t a = pick(rng);
    std::size_t b = pick(rng);
    if (a == b || std::abs(v[a] - v[b]) < min_gap) continue;
    if (a > b) std::swap(a, b);
    arc1.assign(v.begin() + static_cast<std::ptrdiff_t>(a), v.begin() + static_cast<std::ptrdiff_t>(b) + 1);
    arc2.assign(v.begin() + static_cast<std::ptrdiff_t>(b), v.end());
    arc2.insert(arc2.end(), v.begin(), v.begin() + static_cast<std::ptrdiff_t>(a) + 1);
    const double chord = chordal(v[a], v[b]);
    worst = std::max(worst, std::min(hull_diameter(arc1), hull_diameter(arc2)) / chord);
  }
  return worst;
}

double roundness(const Curve& curve) {
  const auto v = vertices(curve);
  if (v.size() < 3) throw DegenerateComponentError("roundness needs at least 3 vertices");
  double area = 0.0;
  cplx c{0.0, 0.0};
  for (std::size_t i = 0; i < v.size(); ++i) {
    const cplx p = v[i];
    const cplx q = v[(i + 1) % v.size()];
    const double w = p.real() * q.imag() - q.real() * p.imag();
    area += w;
    c += (p + q) * w;
  }
  if (area == 0.0) throw DegenerateComponentError("roundness of a curve with zero area");
  c /= 3.0 * area;
  double lo = kInf;
  double hi = 0.0;
  for (const cplx p : v) {
    lo = std::min(lo, std::abs(p - c));
    hi = std::max(hi, std::abs(p - c));
  }
  return lo > 0.0 ? hi / lo : kInf;
}

CurveGeometry curve_geometry(const Curve& curve, int n_pairs, std::uint64_t seed) {
  CurveGeometry g;
  g.component = curve.component;
  g.bounded_turning = bounded_turning(curve, n_pairs, seed);
  g.roundness = roundness(curve);
  g.diameter = hull_diameter(vertices(curve));
  return g;
}

std::vector<Curve> extract_bubble_curves(const ComponentGraph& graph, int multiply_connected_id,
                                         std::size_t min_pixels) {
  const Component* u = multiply_connected_id >= 0 ? &graph.components.at(multiply_connected_id) : nullptr;
  std::vector<int> ids;
  for (const auto& c : graph.components) {
    // Pieces of the multiply connected component's class are cut off by the
    // pixelated Julia set, not separate Fatou components.
    if (u != nullptr && c.kind == u->kind && c.attractor == u->attractor) continue;
    if (c.pixels >= std::max<std::size_t>(min_pixels, 16) && c.holes == 0 && !c.touches_border &&
        !c.contains_infinity) {
      ids.push_back(c.id);
    }
  }
  std::stable_sort(ids.begin(), ids.end(),
                   [&](int a, int b) { return graph.components[a].pixels > graph.components[b].pixels; });
  std::vector<Curve> out;
  out.reserve(ids.size());
  for (const int id : ids) out.push_back(extract_boundary(graph, id));
  return out;
}

SeparationReport separation_report(const std::vector<Curve>& curves, int largest) {
  SeparationReport r;
  r.curve_count = curves.size();
  r.largest = largest;
  const int n = static_cast<int>(curves.size());
  std::vector<std::vector<cplx>> pts;
  std::vector<SortedSet> sorted;
  std::vector<double> diam;
  pts.reserve(curves.size());
  sorted.reserve(curves.size());
  for (const auto& c : curves) {
    pts.push_back(vertices(c));
    sorted.emplace_back(pts.back());
    diam.push_back(hull_diameter(pts.back()));
  }
  auto measure = [&](int a, int b) {
    const double d = std::min(diam[a], diam[b]);
    if (d < 1e-12) throw DegenerateSetError("curve with zero diameter");
    const double dist = pts[a].size() < pts[b].size() ? set_distance(pts[a], sorted[b]) : set_distance(pts[b], sorted[a]);
    r.pairs.push_back({a, b, dist / d});
  };
  const int top = std::min(n, n < 200 ? n : largest);
  for (int a = 0; a < top; ++a) {
    for (int b = a + 1; b < top; ++b) measure(a, b);
  }
  if (n >= 200) {
    // Spatial hash of the remaining curves' bounding-box centers; each curve
    // is measured against curves in its own and adjacent cells.
    double cell = 0.0;
    std::vector<cplx> center(curves.size());
    for (int k = 0; k < n; ++k) {
      double x0 = kInf, x1 = -kInf, y0 = kInf, y1 = -kInf;
      for (const cplx z : pts[k]) {
        x0 = std::min(x0, z.real());
        x1 = std::max(x1, z.real());
        y0 = std::min(y0, z.imag());
        y1 = std::max(y1, z.imag());
      }
      center[k] = cplx(0.5 * (x0 + x1), 0.5 * (y0 + y1));
      if (k >= top) cell = std::max(cell, std::max(x1 - x0, y1 - y0));
    }
    cell = std::max(cell, 1e-300);
    std::map<std::pair<long, long>, std::vector<int>> grid;
    auto key = [&](cplx z) {
      return std::make_pair(static_cast<long>(std::floor(z.real() / cell)), static_cast<long>(std::floor(z.imag() / cell)));
    };
    for (int k = 0; k < n; ++k) grid[key(center[k])].push_back(k);
    for (int a = top; a < n; ++a) {
      const auto [kx, ky] = key(center[a]);
      for (long dx = -1; dx <= 1; ++dx) {
        for (long dy = -1; dy <= 1; ++dy) {
          const auto it = grid.find({kx + dx, ky + dy});
          if (it == grid.end()) continue;
          for (const int b : it->second) {
            if (b < a) measure(b, a);
          }
        }
      }
    }
  }
  if (r.pairs.empty()) {
    r.min_delta_largest = r.min_delta = r.q10 = r.median = r.q90 = kInf;
    return r;
  }
  std::vector<double> all;
  r.min_delta_largest = kInf;
  for (const auto& p : r.pairs) {
    all.push_back(p.delta);
    if (p.a < largest && p.b < largest) r.min_delta_largest = std::min(r.min_delta_largest, p.delta);
  }
  std::sort(all.begin(), all.end());
  auto q = [&](double t) { return all[static_cast<std::size_t>(t * static_cast<double>(all.size() - 1) + 0.5)]; };
  r.min_delta = all.front();
  r.q10 = q(0.1);
  r.median = q(0.5);
  r.q90 = q(0.9);
  return r;
}

double critical_accumulation_distance(const FamilyInstance& inst, const AttractorSet& attractors,
                                      const std::vector<Curve>& curves, int tail_start, int tail_len, int budget) {
  std::vector<cplx> tail;
  for (const auto& cf : critical_orbit_fates(inst, attractors, budget)) {
    if (cf.fate.kind == FateKind::Escape) continue;
    ExtComplex z = iterate(inst.map, cf.point, tail_start);
    for (int k = 0; k < tail_len && z.is_finite(); ++k) {
      tail.push_back(z.value());
      z = inst.map(z);
    }
  }
  double best = kInf;
  if (tail.empty()) return best;
  const SortedSet orbit(tail);
  for (const auto& c : curves) best = std::min(best, set_distance(vertices(c), orbit));
  return best;
}

}  // namespace bubbles

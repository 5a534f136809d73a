#include "bubbles/topology.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <tuple>

#include "bubbles/errors.hpp"

namespace bubbles {

namespace {

constexpr int kDx4[4] = {1, -1, 0, 0};
constexpr int kDy4[4] = {0, 0, 1, -1};
constexpr int kDx8[8] = {1, -1, 0, 0, 1, 1, -1, -1};
constexpr int kDy8[8] = {0, 0, 1, -1, 1, -1, 1, -1};

bool same_class(const PixelLabel& a, const PixelLabel& b) {
  return a.kind == b.kind && a.attractor == b.attractor && a.phase == b.phase;
}

// Chebyshev distance from each labeled pixel to the nearest pixel with a
// different label; pixels outside the window do not count as foreign.
std::vector<std::uint16_t> depth_map(const std::vector<std::int32_t>& comp, int nx, int ny) {
  constexpr std::uint16_t kFar = std::numeric_limits<std::uint16_t>::max() - 1;
  std::vector<std::uint16_t> d(comp.size(), 0);
  auto idx = [nx](int i, int j) { return static_cast<std::size_t>(j) * nx + i; };
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const std::int32_t c = comp[idx(i, j)];
      if (c < 0) continue;
      bool edge = false;
      for (int k = 0; k < 8 && !edge; ++k) {
        const int a = i + kDx8[k];
        const int b = j + kDy8[k];
        if (a < 0 || b < 0 || a >= nx || b >= ny) continue;
        edge = comp[idx(a, b)] != c;
      }
      d[idx(i, j)] = edge ? 1 : kFar;
    }
  }
  auto relax = [&](int i, int j, int a, int b) {
    if (a < 0 || b < 0 || a >= nx || b >= ny) return;
    const std::size_t p = idx(i, j);
    const std::size_t q = idx(a, b);
    if (comp[q] != comp[p]) return;
    d[p] = std::min<std::uint16_t>(d[p], static_cast<std::uint16_t>(d[q] + 1));
  };
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      if (comp[idx(i, j)] < 0) continue;
      relax(i, j, i - 1, j);
      relax(i, j, i - 1, j - 1);
      relax(i, j, i, j - 1);
      relax(i, j, i + 1, j - 1);
    }
  }
  for (int j = ny - 1; j >= 0; --j) {
    for (int i = nx - 1; i >= 0; --i) {
      if (comp[idx(i, j)] < 0) continue;
      relax(i, j, i + 1, j);
      relax(i, j, i + 1, j + 1);
      relax(i, j, i, j + 1);
      relax(i, j, i - 1, j + 1);
    }
  }
  return d;
}

// Enclosed regions of the complement of component c inside its bounding box
// (8-connected, matching 4-connected components). A region only counts when
// something in it is clearly not part of c: a pixel of another fate, an
// Undecided pixel, or a distance estimate well inside the band. Lone marginal
// estimates at the edge of a basin are noise.
int count_holes(const ComponentGraph& g, const ClassificationGrid& grid, const Component& c, float strong) {
  const int w = c.max_i - c.min_i + 1;
  const int h = c.max_j - c.min_j + 1;
  std::vector<std::uint8_t> seen(static_cast<std::size_t>(w) * h, 0);
  auto inside = [&](int i, int j) { return g.component_at(i, j) == c.id; };
  int holes = 0;
  std::vector<std::pair<int, int>> stack;
  for (int j = c.min_j; j <= c.max_j; ++j) {
    for (int i = c.min_i; i <= c.max_i; ++i) {
      const std::size_t s = static_cast<std::size_t>(j - c.min_j) * w + (i - c.min_i);
      if (seen[s] || inside(i, j)) continue;
      seen[s] = 1;
      bool open = false;
      bool confirmed = false;
      stack.assign(1, {i, j});
      while (!stack.empty()) {
        const auto [x, y] = stack.back();
        stack.pop_back();
        if (x == c.min_i || x == c.max_i || y == c.min_j || y == c.max_j) open = true;
        const PixelLabel& l = grid.at(x, y);
        if (l.kind != c.kind || l.attractor != c.attractor || l.phase != c.phase || l.distance < strong) {
          confirmed = true;
        }
        for (int k = 0; k < 8; ++k) {
          const int a = x + kDx8[k];
          const int b = y + kDy8[k];
          if (a < c.min_i || a > c.max_i || b < c.min_j || b > c.max_j) continue;
          const std::size_t t = static_cast<std::size_t>(b - c.min_j) * w + (a - c.min_i);
          if (seen[t] || inside(a, b)) continue;
          seen[t] = 1;
          stack.push_back({a, b});
        }
      }
      if (!open && confirmed) ++holes;
    }
  }
  return holes;
}

}  // namespace

int ComponentGraph::component_at(cplx z) const {
  int i = 0;
  int j = 0;
  if (!window.locate(z, i, j)) throw OutOfWindowError("point " + to_string(ExtComplex(z)) + " is outside the window");
  return component_at(i, j);
}

std::vector<int> ComponentGraph::significant_ids() const {
  std::vector<int> out;
  for (const auto& c : components) {
    if (c.significant) out.push_back(c.id);
  }
  return out;
}

const ComponentEdge* ComponentGraph::main_edge(int from) const {
  const ComponentEdge* best = nullptr;
  for (const auto& e : edges) {
    if (e.from != from || e.to < 0) continue;
    if (!best || e.samples > best->samples) best = &e;
  }
  return best;
}

ComponentGraph label_components(const ClassificationGrid& grid, int min_depth, float strong) {
  const int nx = grid.window.nx;
  const int ny = grid.window.ny;
  ComponentGraph g;
  g.window = grid.window;
  g.min_depth = min_depth;
  g.pixel_component.assign(grid.size(), -1);
  auto idx = [nx](int i, int j) { return static_cast<std::size_t>(j) * nx + i; };

  std::vector<std::pair<int, int>> stack;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const PixelLabel& l = grid.at(i, j);
      if (l.julia()) {
        ++g.julia_pixels;
        g.undecided_pixels += l.kind == FateKind::Undecided;
        continue;
      }
      if (g.pixel_component[idx(i, j)] >= 0) continue;
      Component c;
      c.id = static_cast<int>(g.components.size());
      c.kind = l.kind;
      c.attractor = l.attractor;
      c.phase = l.phase;
      c.min_i = c.max_i = i;
      c.min_j = c.max_j = j;
      g.pixel_component[idx(i, j)] = c.id;
      stack.assign(1, {i, j});
      while (!stack.empty()) {
        const auto [x, y] = stack.back();
        stack.pop_back();
        ++c.pixels;
        c.min_i = std::min(c.min_i, x);
        c.max_i = std::max(c.max_i, x);
        c.min_j = std::min(c.min_j, y);
        c.max_j = std::max(c.max_j, y);
        if (x == 0 || y == 0 || x == nx - 1 || y == ny - 1) c.touches_border = true;
        for (int k = 0; k < 4; ++k) {
          const int a = x + kDx4[k];
          const int b = y + kDy4[k];
          if (a < 0 || b < 0 || a >= nx || b >= ny) continue;
          const PixelLabel& m = grid.at(a, b);
          if (m.julia() || g.pixel_component[idx(a, b)] >= 0 || !same_class(l, m)) continue;
          g.pixel_component[idx(a, b)] = c.id;
          stack.push_back({a, b});
        }
      }
      g.components.push_back(c);
    }
  }

  g.depth = depth_map(g.pixel_component, nx, ny);
  for (std::size_t p = 0; p < g.depth.size(); ++p) {
    const std::int32_t c = g.pixel_component[p];
    if (c >= 0) g.components[c].max_depth = std::max<int>(g.components[c].max_depth, g.depth[p]);
  }

  // The border component with the longest stretch of window border holds infinity.
  std::map<int, int> border;
  for (int i = 0; i < nx; ++i) {
    ++border[g.component_at(i, 0)];
    ++border[g.component_at(i, ny - 1)];
  }
  for (int j = 1; j < ny - 1; ++j) {
    ++border[g.component_at(0, j)];
    ++border[g.component_at(nx - 1, j)];
  }
  int best = 0;
  for (const auto& [id, n] : border) {
    if (id >= 0 && n > best) {
      best = n;
      g.infinity_component = id;
    }
  }

  for (auto& c : g.components) {
    c.significant = c.max_depth >= min_depth;
    c.plane_holes = count_holes(g, grid, c, strong);
    c.contains_infinity = c.id == g.infinity_component;
    c.holes = c.contains_infinity ? std::max(0, c.plane_holes - 1) : c.plane_holes;
  }

  // Julia clusters and residue.
  std::vector<std::uint8_t> seen(grid.size(), 0);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      if (g.component_at(i, j) >= 0) continue;
      bool touches_disk = false;
      for (int k = 0; k < 8 && !touches_disk; ++k) {
        const int a = i + kDx8[k];
        const int b = j + kDy8[k];
        if (a < 0 || b < 0 || a >= nx || b >= ny) continue;
        const int c = g.component_at(a, b);
        touches_disk = c >= 0 && g.components[c].significant && g.components[c].holes == 0;
      }
      if (!touches_disk) ++g.residue_pixels;
      if (seen[idx(i, j)]) continue;
      ++g.julia_clusters;
      seen[idx(i, j)] = 1;
      stack.assign(1, {i, j});
      while (!stack.empty()) {
        const auto [x, y] = stack.back();
        stack.pop_back();
        for (int k = 0; k < 8; ++k) {
          const int a = x + kDx8[k];
          const int b = y + kDy8[k];
          if (a < 0 || b < 0 || a >= nx || b >= ny) continue;
          if (seen[idx(a, b)] || g.component_at(a, b) >= 0) continue;
          seen[idx(a, b)] = 1;
          stack.push_back({a, b});
        }
      }
    }
  }

  // Non-escaping regions holding several significant Fatou components.
  std::fill(seen.begin(), seen.end(), 0);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      if (seen[idx(i, j)] || !not_escape(grid.at(i, j))) continue;
      std::set<int> held;
      seen[idx(i, j)] = 1;
      stack.assign(1, {i, j});
      while (!stack.empty()) {
        const auto [x, y] = stack.back();
        stack.pop_back();
        const int c = g.component_at(x, y);
        if (c >= 0 && g.components[c].significant) held.insert(c);
        for (int k = 0; k < 4; ++k) {
          const int a = x + kDx4[k];
          const int b = y + kDy4[k];
          if (a < 0 || b < 0 || a >= nx || b >= ny) continue;
          if (seen[idx(a, b)] || !not_escape(grid.at(a, b))) continue;
          seen[idx(a, b)] = 1;
          stack.push_back({a, b});
        }
      }
      if (held.size() >= 2) ++g.shared_filled_regions;
    }
  }
  return g;
}

std::vector<std::size_t> deep_samples(const ComponentGraph& graph, const ClassificationGrid& grid, int id, int n,
                                      std::uint64_t seed) {
  const Component& c = graph.components.at(id);
  const int need = std::min(graph.min_depth, c.max_depth);
  std::vector<std::size_t> pool;
  for (int j = c.min_j; j <= c.max_j; ++j) {
    for (int i = c.min_i; i <= c.max_i; ++i) {
      const std::size_t p = static_cast<std::size_t>(j) * graph.window.nx + i;
      if (graph.pixel_component[p] == id && graph.depth[p] >= need) pool.push_back(p);
    }
  }
  // Ties between equal iteration counts are broken by a seeded hash of the
  // pixel index, so only the first n need sorting.
  auto key = [&](std::size_t p) {
    std::uint64_t h = seed * 0x9E3779B97F4A7C15ULL + p;
    h = (h ^ (h >> 30)) * 0xBF58476D1CE4E5B9ULL;
    h = (h ^ (h >> 27)) * 0x94D049BB133111EBULL;
    return std::make_tuple(grid.labels[p].iterations, h ^ (h >> 31), p);
  };
  auto less = [&](std::size_t a, std::size_t b) { return key(a) < key(b); };
  const std::size_t keep = std::min(pool.size(), static_cast<std::size_t>(std::max(n, 0)));
  std::partial_sort(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(keep), pool.end(), less);
  pool.resize(keep);
  return pool;
}

void component_map_edges(const RationalMap& f, const ClassificationGrid& grid, ComponentGraph& graph, int samples,
                         std::uint64_t seed) {
  graph.edges.clear();
  const int nx = graph.window.nx;
  auto center = [&](std::size_t p) {
    return graph.window.pixel(static_cast<int>(p % nx), static_cast<int>(p / nx));
  };
  for (const int id : graph.significant_ids()) {
    std::map<int, int> hits;
    for (const std::size_t p : deep_samples(graph, grid, id, samples, seed + id)) {
      const ExtComplex w = f(ExtComplex(center(p)));
      int to = -1;
      int i = 0;
      int j = 0;
      if (w.is_infinite()) {
        to = graph.infinity_component;
      } else if (graph.window.locate(w.value(), i, j)) {
        to = graph.component_at(i, j);
      }
      ++hits[to];
    }
    for (const auto& [to, n] : hits) graph.edges.push_back({id, to, n, 0.0});
  }
  // Degree of each edge: preimages of target samples that land in the source.
  for (auto& e : graph.edges) {
    if (e.to < 0) continue;
    const auto pts = deep_samples(graph, grid, e.to, 4, seed);
    if (pts.empty()) continue;
    int total = 0;
    for (const std::size_t p : pts) {
      for (const auto& z : preimages(f, ExtComplex(center(p)))) {
        int i = 0;
        int j = 0;
        if (z.is_infinite()) {
          total += e.from == graph.infinity_component;
        } else if (graph.window.locate(z.value(), i, j)) {
          total += graph.component_at(i, j) == e.from;
        }
      }
    }
    e.degree = static_cast<double>(total) / static_cast<double>(pts.size());
  }
}

bool not_escape(const PixelLabel& l) { return l.kind != FateKind::Escape; }
bool filled_closure(const PixelLabel& l) { return l.kind != FateKind::Escape || l.boundary; }
bool is_julia(const PixelLabel& l) { return l.julia(); }

bool same_component(const ClassificationGrid& grid, cplx z1, cplx z2, const PixelPredicate& cls) {
  const Window& w = grid.window;
  int i1 = 0, j1 = 0, i2 = 0, j2 = 0;
  if (!w.locate(z1, i1, j1)) throw OutOfWindowError("point " + to_string(ExtComplex(z1)) + " is outside the window");
  if (!w.locate(z2, i2, j2)) throw OutOfWindowError("point " + to_string(ExtComplex(z2)) + " is outside the window");
  if (!cls(grid.at(i1, j1)) || !cls(grid.at(i2, j2))) return false;
  std::vector<std::uint8_t> seen(grid.size(), 0);
  std::vector<std::pair<int, int>> stack{{i1, j1}};
  seen[static_cast<std::size_t>(j1) * w.nx + i1] = 1;
  while (!stack.empty()) {
    const auto [x, y] = stack.back();
    stack.pop_back();
    if (x == i2 && y == j2) return true;
    for (int k = 0; k < 4; ++k) {
      const int a = x + kDx4[k];
      const int b = y + kDy4[k];
      if (a < 0 || b < 0 || a >= w.nx || b >= w.ny) continue;
      const std::size_t q = static_cast<std::size_t>(b) * w.nx + a;
      if (seen[q] || !cls(grid.at(a, b))) continue;
      seen[q] = 1;
      stack.push_back({a, b});
    }
  }
  return false;
}

Curve extract_boundary(const ComponentGraph& graph, int id) {
  const Component& c = graph.components.at(id);
  if (c.pixels < 16) throw DegenerateComponentError("component " + std::to_string(id) + " has fewer than 16 pixels");
  if (c.contains_infinity || c.touches_border) {
    throw DegenerateComponentError("component " + std::to_string(id) + " is not bounded inside the window");
  }
  // Marching squares on the indicator of the component over cells whose
  // corners are pixel centers. Crossing points sit at edge midpoints; saddle
  // cells keep diagonal pixels apart, matching 4-connectivity.
  const int i0 = c.min_i - 1;
  const int j0 = c.min_j - 1;
  const int w = c.max_i - c.min_i + 3;  // corner columns
  const int h = c.max_j - c.min_j + 3;
  auto in = [&](int a, int b) {
    const int i = a + i0;
    const int j = b + j0;
    if (i < c.min_i || i > c.max_i || j < c.min_j || j > c.max_j) return false;
    return graph.component_at(i, j) == id;
  };
  // Edge keys: horizontal edge (a,b)-(a+1,b) -> 2*(b*w+a), vertical (a,b)-(a,b+1) -> 2*(b*w+a)+1.
  auto hkey = [w](int a, int b) { return 2L * (static_cast<long>(b) * w + a); };
  auto vkey = [w](int a, int b) { return 2L * (static_cast<long>(b) * w + a) + 1; };
  std::map<long, std::vector<long>> adj;
  auto link = [&](long p, long q) {
    adj[p].push_back(q);
    adj[q].push_back(p);
  };
  for (int b = 0; b + 1 < h; ++b) {
    for (int a = 0; a + 1 < w; ++a) {
      const bool tl = in(a, b), tr = in(a + 1, b), bl = in(a, b + 1), br = in(a + 1, b + 1);
      const long top = hkey(a, b), bottom = hkey(a, b + 1), left = vkey(a, b), right = vkey(a + 1, b);
      const int n = tl + tr + bl + br;
      if (n == 0 || n == 4) continue;
      if (n == 2 && tl == br) {
        // Saddle: cut each inside corner off on its own.
        if (tl) {
          link(top, left);
          link(bottom, right);
        } else {
          link(top, right);
          link(bottom, left);
        }
        continue;
      }
      std::vector<long> cut;
      if (tl != tr) cut.push_back(top);
      if (bl != br) cut.push_back(bottom);
      if (tl != bl) cut.push_back(left);
      if (tr != br) cut.push_back(right);
      link(cut[0], cut[1]);
    }
  }
  auto point = [&](long key) {
    const long cell = key / 2;
    const int a = static_cast<int>(cell % w);
    const int b = static_cast<int>(cell / w);
    const cplx p = graph.window.pixel(a + i0, b + j0);
    const cplx q = (key % 2 == 0) ? graph.window.pixel(a + i0 + 1, b + j0) : graph.window.pixel(a + i0, b + j0 + 1);
    return 0.5 * (p + q);
  };
  std::set<long> used;
  Curve best;
  double best_area = -1.0;
  for (const auto& [start, _] : adj) {
    if (used.count(start)) continue;
    std::vector<cplx> loop;
    long prev = -1;
    long cur = start;
    for (;;) {
      used.insert(cur);
      loop.push_back(point(cur));
      const auto& nb = adj[cur];
      const long next = (nb[0] != prev) ? nb[0] : nb[1];
      prev = cur;
      cur = next;
      if (cur == start) break;
    }
    loop.push_back(loop.front());
    double area = 0.0;
    for (std::size_t k = 0; k + 1 < loop.size(); ++k) {
      area += loop[k].real() * loop[k + 1].imag() - loop[k + 1].real() * loop[k].imag();
    }
    area = std::abs(area);
    if (area > best_area) {
      best_area = area;
      best.points = std::move(loop);
    }
  }
  best.component = id;
  best.pixel_size = std::min(graph.window.pixel_width(), graph.window.pixel_height());
  return best;
}

BoxDimension box_dimension(const ClassificationGrid& grid, const PixelPredicate& in_set,
                           const std::vector<int>& k_range) {
  const int nx = grid.window.nx;
  const int ny = grid.window.ny;
  BoxDimension out;
  std::vector<double> xs;
  std::vector<double> ys;
  for (const int k : k_range) {
    const int bx = nx >> k;
    const int by = ny >> k;
    if (k < 0 || bx < 8 || by < 8) continue;
    const int cx = (nx + bx - 1) / bx;
    const int cy = (ny + by - 1) / by;
    std::vector<std::uint8_t> hit(static_cast<std::size_t>(cx) * cy, 0);
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        if (in_set(grid.at(i, j))) hit[static_cast<std::size_t>(j / by) * cx + i / bx] = 1;
      }
    }
    const std::size_t n = static_cast<std::size_t>(std::count(hit.begin(), hit.end(), 1));
    out.box_pixels.push_back(bx);
    out.counts.push_back(n);
    if (n == 0) continue;
    xs.push_back(k * std::log(2.0));
    ys.push_back(std::log(static_cast<double>(n)));
  }
  if (xs.size() < 4) {
    throw InsufficientScalesError("box counting needs at least 4 nonempty scales with boxes of 8 pixels or more");
  }
  const double m = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / m;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / m;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sxx += (xs[k] - mx) * (xs[k] - mx);
    sxy += (xs[k] - mx) * (ys[k] - my);
    syy += (ys[k] - my) * (ys[k] - my);
  }
  out.slope = sxy / sxx;
  out.r2 = syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
  return out;
}

}  // namespace bubbles

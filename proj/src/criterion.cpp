#include "bubbles/criterion.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace bubbles {

std::string to_string(TopologyClass c) {
  switch (c) {
    case TopologyClass::CantorBubbles: return "CantorBubbles";
    case TopologyClass::CantorCirclesLike: return "CantorCirclesLike";
    case TopologyClass::CantorLike: return "CantorLike";
    case TopologyClass::ConnectedLike: return "ConnectedLike";
    case TopologyClass::Unknown: return "Unknown";
  }
  return "Unknown";
}

std::string to_string(TriState t) {
  switch (t) {
    case TriState::Yes: return "yes";
    case TriState::No: return "no";
    case TriState::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

TopologyClass classify_topology(const ComponentGraph& graph, double undecided_fraction,
                                const TopologyLimits& limits) {
  if (undecided_fraction > limits.undecided) return TopologyClass::Unknown;
  int multiply = 0;
  int simply = 0;
  bool bounded = false;
  for (const auto& c : graph.components) {
    if (!c.significant) continue;
    (c.multiply_connected() ? multiply : simply) += 1;
    bounded = bounded || c.id != graph.infinity_component;
  }
  if (!bounded && graph.infinity_component >= 0 && graph.julia_clusters >= 2) return TopologyClass::CantorLike;
  if (multiply == 1 && simply >= 1 && graph.residue_pixels > 0) {
    // A pinched filled component (two Fatou components in one non-escaping
    // region) is a basilica, not a bubble.
    return graph.shared_filled_regions > 0 ? TopologyClass::Unknown : TopologyClass::CantorBubbles;
  }
  if (multiply >= 2 && simply <= 2) return TopologyClass::CantorCirclesLike;
  if (multiply == 0 && graph.julia_clusters == 1) return TopologyClass::ConnectedLike;
  return TopologyClass::Unknown;
}

namespace {

constexpr int kSpeckLimit = 4096;

// Components met by the 8-connected Julia cluster through (i, j), or empty
// when the cluster reaches the window border or is too large to be a speck.
std::set<int> speck_neighbours(const ClassificationGrid& grid, const ComponentGraph& graph, int i, int j) {
  const int nx = grid.window.nx;
  const int ny = grid.window.ny;
  std::set<int> around;
  std::set<std::size_t> seen{static_cast<std::size_t>(j) * nx + i};
  std::vector<std::pair<int, int>> stack{{i, j}};
  while (!stack.empty()) {
    const auto [x, y] = stack.back();
    stack.pop_back();
    if (x == 0 || y == 0 || x == nx - 1 || y == ny - 1) return {};
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        const int a = x + dx;
        const int b = y + dy;
        const std::size_t q = static_cast<std::size_t>(b) * nx + a;
        if (grid.labels[q].julia()) {
          if (seen.insert(q).second) {
            if (seen.size() > kSpeckLimit) return {};
            stack.push_back({a, b});
          }
        } else if (dx == 0 || dy == 0) {
          around.insert(graph.pixel_component[q]);  // never -1: not a Julia pixel
        }
      }
    }
  }
  return around;
}

// Components within Chebyshev radius r of z that belong to `attractor`,
// largest first.
std::vector<int> components_near(const ComponentGraph& graph, cplx z, int attractor, int r) {
  int i0 = 0;
  int j0 = 0;
  if (!graph.window.locate(z, i0, j0)) return {};
  std::set<int> found;
  for (int j = std::max(0, j0 - r); j <= std::min(graph.window.ny - 1, j0 + r); ++j) {
    for (int i = std::max(0, i0 - r); i <= std::min(graph.window.nx - 1, i0 + r); ++i) {
      const int c = graph.component_at(i, j);
      if (c >= 0 && graph.components[c].attractor == attractor) found.insert(c);
    }
  }
  std::vector<int> out(found.begin(), found.end());
  std::stable_sort(out.begin(), out.end(),
                   [&](int a, int b) { return graph.components[a].pixels > graph.components[b].pixels; });
  return out;
}

bool same_class(const Component& a, const Component& b) {
  return a.kind == b.kind && a.attractor == b.attractor && a.phase == b.phase;
}

std::string describe(cplx z) { return to_string(ExtComplex(z)); }

}  // namespace

InvarianceResult complete_invariance_test(const RationalMap& f, const ClassificationGrid& grid,
                                          const ComponentGraph& graph, const AttractorSet& attractors, int id,
                                          int n_samples, std::uint64_t seed) {
  InvarianceResult out;
  const Component& self = graph.components.at(id);
  const int nx = graph.window.nx;
  // Candidates beyond n: samples whose preimages fall on the Julia band are
  // skipped rather than reported.
  const auto pool = deep_samples(graph, grid, id, 4 * n_samples, seed);
  int resolved_samples = 0;
  for (const std::size_t p : pool) {
    if (resolved_samples >= n_samples) break;
    const cplx w = graph.window.pixel(static_cast<int>(p % nx), static_cast<int>(p / nx));
    ++out.samples;
    int inside = 0;
    int unresolved = 0;
    for (const auto& z : preimages(f, ExtComplex(w))) {
      if (z.is_infinite()) {
        if (id == graph.infinity_component) {
          ++inside;
        } else if (graph.infinity_component >= 0) {
          out.witnesses.push_back({w, z, graph.infinity_component, false});
        } else {
          ++unresolved;
        }
        continue;
      }
      int i = 0;
      int j = 0;
      if (!graph.window.locate(z.value(), i, j)) {
        // Outside the window only the border component can be continued.
        const OrbitFate fate = classify_orbit(f, z, attractors, 10000);
        if (self.touches_border && fate.kind == self.kind && fate.attractor == self.attractor) {
          ++inside;
        } else {
          ++unresolved;
        }
        continue;
      }
      const int c = graph.component_at(i, j);
      if (c == id) {
        ++inside;
      } else if (c >= 0) {
        const Component& other = graph.components[c];
        if (other.significant || !same_class(other, self)) {
          out.witnesses.push_back({w, z, c, false});
        } else {
          ++unresolved;
        }
      } else {
        // Tiny components of the tested class inside the speck are candidate
        // preimage components themselves; the speck is judged by what encloses it.
        std::set<int> around;
        for (const int c2 : speck_neighbours(grid, graph, i, j)) {
          const Component& other = graph.components[c2];
          if (other.significant || !same_class(other, self)) around.insert(c2);
        }
        if (around.size() == 1 && *around.begin() != id) {
          out.witnesses.push_back({w, z, *around.begin(), true});
        } else {
          ++unresolved;
        }
      }
    }
    out.preimages_inside += inside;
    out.preimages_unresolved += unresolved;
    resolved_samples += unresolved == 0;
  }
  if (!out.witnesses.empty()) {
    out.value = TriState::No;
  } else if (resolved_samples >= std::max(1, n_samples / 2)) {
    out.value = TriState::Yes;
  }
  return out;
}

namespace {

bool is_invariant(const ComponentGraph& graph, const AttractorSet& set, int id) {
  const Component& c = graph.components[id];
  if (c.attractor < 0) return false;
  const Attractor& a = set.cycles[c.attractor];
  if (a.cycle.period == 1) {
    if (a.cycle.points[0].is_infinite()) return id == graph.infinity_component;
    const auto near = components_near(graph, a.cycle.points[0].value(), c.attractor, 3);
    if (std::find(near.begin(), near.end(), id) != near.end()) return true;
  }
  const ComponentEdge* e = graph.main_edge(id);
  return e != nullptr && e->to == id;
}

Evidence hypothesis_u(const InvarianceResult& r) {
  Evidence e;
  e.value = r.value;
  std::ostringstream os;
  os << r.samples << " samples, " << r.preimages_inside << " preimages inside, " << r.preimages_unresolved
     << " unresolved, " << r.witnesses.size() << " outside";
  e.notes.push_back(os.str());
  for (const auto& w : r.witnesses) {
    e.notes.push_back("preimage " + to_string(w.preimage) + " of " + describe(w.sample) + " lies in component " +
                      std::to_string(w.landed_in) + (w.speck ? " (enclosed speck)" : ""));
    if (e.notes.size() > 4) break;
  }
  return e;
}

}  // namespace

CriterionRun run_criterion(const FamilyInstance& inst, const Window& window, int budget,
                           const CriterionOptions& opts) {
  CriterionRun run;
  run.attractors = find_attractors(inst, budget, opts.render.dynamics);
  run.grid = render_grid(inst, window, run.attractors, budget, opts.render);
  run.graph = label_components(run.grid, opts.min_depth, opts.strong);
  component_map_edges(inst.map, run.grid, run.graph, opts.samples, opts.seed);

  const AttractorSet& set = run.attractors;
  const ComponentGraph& g = run.graph;
  CriterionVerdict& v = run.verdict;
  v.undecided_fraction = run.grid.undecided_fraction();
  v.undecided_limit = set.has_parabolic() ? opts.parabolic_undecided_limit : opts.undecided_limit;
  for (const auto& c : g.components) {
    if (!c.significant) continue;
    (c.multiply_connected() ? v.multiply_connected : v.simply_connected) += 1;
  }
  v.residue_pixels = g.residue_pixels;
  v.julia_clusters = g.julia_clusters;
  v.shared_filled_regions = g.shared_filled_regions;

  for (const auto& a : set.cycles) {
    if (a.cycle.period < 2 || a.kind == CycleKind::Parabolic) continue;
    const auto& pts = a.cycle.points;
    for (std::size_t k = 1; k < pts.size(); ++k) {
      if (pts[0].is_infinite() || pts[k].is_infinite()) continue;
      if (!window.contains(pts[0].value()) || !window.contains(pts[k].value())) continue;
      if (same_component(run.grid, pts[0].value(), pts[k].value(), filled_closure)) {
        v.basilica_witnesses.push_back("cycle points " + to_string(pts[0]) + " and " + to_string(pts[k]) +
                                       " share one non-escaping region");
      }
    }
  }
  v.topology_class = classify_topology(g, v.undecided_fraction, {v.undecided_limit});
  if (!v.basilica_witnesses.empty() && v.topology_class == TopologyClass::CantorBubbles) {
    v.topology_class = TopologyClass::Unknown;
  }

  // U: the multiply connected invariant component, else the one holding infinity.
  for (const int id : g.significant_ids()) {
    if (g.components[id].multiply_connected() && is_invariant(g, set, id)) {
      if (v.u_id < 0 || g.components[id].pixels > g.components[v.u_id].pixels) v.u_id = id;
    }
  }
  if (v.u_id < 0 && g.infinity_component >= 0 && is_invariant(g, set, g.infinity_component)) {
    v.u_id = g.infinity_component;
  }
  // V: an invariant component at a finite fixed attractor, else infinity's.
  for (std::size_t k = 0; k < set.cycles.size() && v.v_id < 0; ++k) {
    const Attractor& a = set.cycles[k];
    if (a.cycle.period != 1 || a.cycle.points[0].is_infinite()) continue;
    for (const int id : components_near(g, a.cycle.points[0].value(), static_cast<int>(k), 3)) {
      if (id != v.u_id) {
        v.v_id = id;
        break;
      }
    }
  }
  if (v.v_id < 0 && g.infinity_component >= 0 && g.infinity_component != v.u_id &&
      is_invariant(g, set, g.infinity_component)) {
    v.v_id = g.infinity_component;
  }

  if (v.u_id < 0) {
    v.u_completely_invariant.notes.push_back("no invariant multiply connected component in the window");
  } else {
    v.u_completely_invariant =
        hypothesis_u(complete_invariance_test(inst.map, run.grid, g, set, v.u_id, opts.samples, opts.seed));
  }
  if (v.v_id < 0) {
    v.v_not_completely_invariant.notes.push_back("no second invariant component in the window");
  } else {
    const auto r = complete_invariance_test(inst.map, run.grid, g, set, v.v_id, opts.samples, opts.seed + 1);
    v.v_not_completely_invariant = hypothesis_u(r);
    // The hypothesis is the negation of complete invariance.
    v.v_not_completely_invariant.value = r.value == TriState::No    ? TriState::Yes
                                         : r.value == TriState::Yes ? TriState::No
                                                                    : TriState::Inconclusive;
  }

  // Critical values: by pixel membership, else by the fate of the orbit when
  // it ends at U's attractor and U is the whole basin.
  Evidence& cv = v.critical_values_in_uv;
  if (v.u_id < 0 || v.v_id < 0) {
    cv.notes.push_back("U or V is absent");
  } else {
    const bool u_whole_basin = v.u_completely_invariant.value == TriState::Yes;
    const int u_att = g.components[v.u_id].attractor;
    const int v_att = g.components[v.v_id].attractor;
    bool all = true;
    bool failed = false;
    for (const auto& cf : critical_orbit_fates(inst, set, budget, opts.render.dynamics)) {
      const ExtComplex value = inst.map(cf.point);
      int where = -1;
      // A pole evaluated in floating point lands huge but finite.
      if (value.is_infinite() || chordal_distance(value, ExtComplex::infinity()) < opts.render.dynamics.trap_eps) {
        where = g.infinity_component;
      } else {
        int i = 0;
        int j = 0;
        if (window.locate(value.value(), i, j)) {
          where = g.component_at(i, j);
          if (where < 0) {
            const auto near = components_near(g, value.value(), cf.fate.attractor, 1);
            if (near.size() == 1) where = near[0];
          }
        }
      }
      const std::string name = "critical value " + to_string(value) + " (of " + to_string(cf.point) + ")";
      if (where >= 0 && (where == v.u_id || where == v.v_id)) {
        cv.notes.push_back(name + " lies in " + (where == v.u_id ? "U" : "V"));
      } else if (u_whole_basin && cf.fate.attractor == u_att && cf.fate.kind != FateKind::Undecided) {
        cv.notes.push_back(name + " lies in the basin of U's attractor");
      } else if (cf.fate.kind == FateKind::Undecided) {
        cv.notes.push_back(name + " has an undecided orbit");
        all = false;
      } else if (cf.fate.attractor != u_att && cf.fate.attractor != v_att) {
        cv.notes.push_back(name + " is attracted to a cycle outside U and V");
        failed = true;
      } else if (where >= 0) {
        cv.notes.push_back(name + " lies in component " + std::to_string(where));
        failed = true;
      } else {
        cv.notes.push_back(name + " is not resolved on the grid");
        all = false;
      }
    }
    cv.value = failed ? TriState::No : all ? TriState::Yes : TriState::Inconclusive;
  }
  return run;
}

CriterionVerdict criterion_verdict(const FamilyInstance& inst, const Window& window, int resolution, int budget,
                                   const CriterionOptions& opts) {
  return run_criterion(inst, window.with_resolution(resolution, resolution), budget, opts).verdict;
}

}  // namespace bubbles

#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "bubbles/render.hpp"

namespace bubbles {

struct Component {
  int id = 0;
  FateKind kind = FateKind::Escape;
  int attractor = -1;
  int phase = 0;
  std::size_t pixels = 0;
  // Enclosed complement regions in the plane.
  int plane_holes = 0;
  // Sphere convention: the component holding infinity does not count the
  // region that contains everything else.
  int holes = 0;
  bool contains_infinity = false;
  bool touches_border = false;
  int max_depth = 0;         // Chebyshev distance to the nearest foreign pixel
  bool significant = false;  // max_depth >= the labeling threshold
  int min_i = 0, max_i = 0, min_j = 0, max_j = 0;

  bool multiply_connected() const { return holes >= 1; }
};

struct ComponentEdge {
  int from = -1;
  int to = -1;      // -1: samples landed on Julia/Undecided pixels or outside
  int samples = 0;  // samples of `from` whose image landed in `to`
  // Mean number of preimages (of sample points of `to`) lying in `from`.
  double degree = 0.0;
};

struct ComponentGraph {
  Window window;
  std::vector<std::int32_t> pixel_component;  // -1 for Julia/Undecided pixels
  std::vector<std::uint16_t> depth;
  std::vector<Component> components;
  std::vector<ComponentEdge> edges;
  int infinity_component = -1;
  int min_depth = 3;
  std::size_t julia_pixels = 0;
  std::size_t undecided_pixels = 0;
  // 8-connected clusters of Julia pixels.
  std::size_t julia_clusters = 0;
  // Julia pixels not touching any significant simply connected component.
  std::size_t residue_pixels = 0;
  // Connected regions of non-escaping pixels holding two or more significant
  // Fatou components (a pinched, basilica-like filled Julia component).
  int shared_filled_regions = 0;

  int component_at(int i, int j) const { return pixel_component[static_cast<std::size_t>(j) * window.nx + i]; }
  // Component containing z, -1 on Julia pixels. Throws OutOfWindowError.
  int component_at(cplx z) const;
  std::vector<int> significant_ids() const;
  const ComponentEdge* main_edge(int from) const;
};

// `strong`: distance estimate (pixel widths) below which a lone boundary pixel
// is trusted as a separate piece of the Julia set.
ComponentGraph label_components(const ClassificationGrid& grid, int min_depth = 3, float strong = 0.125f);

// Deep interior pixel indices of a component: depth >= min_depth (or the
// deepest available), lowest iteration counts first, ties in a seeded
// order.
std::vector<std::size_t> deep_samples(const ComponentGraph& graph, const ClassificationGrid& grid, int id,
                                      int n, std::uint64_t seed);

// Forward edges of every significant component, from `samples` deep pixels each.
void component_map_edges(const RationalMap& f, const ClassificationGrid& grid, ComponentGraph& graph,
                         int samples = 16, std::uint64_t seed = 1);

using PixelPredicate = std::function<bool(const PixelLabel&)>;
bool not_escape(const PixelLabel& l);
// Non-escaping or within the Julia band: keeps pinch points of the filled
// Julia set connected at pixel scale.
bool filled_closure(const PixelLabel& l);
bool is_julia(const PixelLabel& l);

// True iff z1 and z2 lie in one 4-connected region of pixels satisfying `cls`.
bool same_component(const ClassificationGrid& grid, cplx z1, cplx z2, const PixelPredicate& cls = filled_closure);

struct Curve {
  std::vector<cplx> points;  // closed: front() == back()
  int component = -1;
  double pixel_size = 0.0;
};

// Outer boundary of a component at the half level between its pixels and the rest.
Curve extract_boundary(const ComponentGraph& graph, int id);

struct BoxDimension {
  double slope = 0.0;
  double r2 = 0.0;
  std::vector<int> box_pixels;
  std::vector<std::size_t> counts;
};

// Box-counting slope over dyadic scales: at scale k boxes are 2^-k of the
// window side. Needs at least four scales with boxes of 8 pixels or more.
BoxDimension box_dimension(const ClassificationGrid& grid, const PixelPredicate& in_set,
                           const std::vector<int>& k_range);

}  // namespace bubbles

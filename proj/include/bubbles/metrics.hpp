#pragma once

#include <cstdint>
#include <vector>

#include "bubbles/dynamics.hpp"
#include "bubbles/topology.hpp"

namespace bubbles {

// Largest chordal distance between two points of the set (0 for fewer than two).
double chordal_diameter(const std::vector<ExtComplex>& pts);

// Smallest chordal distance between the sets over the smaller chordal
// diameter. Throws DegenerateSetError when a diameter is below 1e-12.
double relative_distance(const std::vector<ExtComplex>& a, const std::vector<ExtComplex>& b);

// Worst ratio min(diam arc1, diam arc2) / chordal(x, y) over n_pairs vertex
// pairs drawn from a seeded sequence; pairs closer than 3 pixel widths are
// skipped. Adding pairs never lowers the estimate. Throws DegenerateComponentError
// for curves with fewer than 64 vertices.
double bounded_turning(const Curve& curve, int n_pairs = 512, std::uint64_t seed = 1);

// Max over min distance from the area centroid to the vertices.
double roundness(const Curve& curve);

struct CurveGeometry {
  int component = -1;
  double bounded_turning = 1.0;
  double roundness = 1.0;
  double diameter = 0.0;  // chordal
};

CurveGeometry curve_geometry(const Curve& curve, int n_pairs = 512, std::uint64_t seed = 1);

// Boundaries of the bounded simply connected components with at least
// `min_pixels` pixels, largest components first. Components sharing the
// attractor of `multiply_connected_id` (if >= 0) are skipped.
std::vector<Curve> extract_bubble_curves(const ComponentGraph& graph, int multiply_connected_id = -1,
                                         std::size_t min_pixels = 16);

struct SeparationPair {
  int a = -1;  // indices into the curve list
  int b = -1;
  double delta = 0.0;
};

struct SeparationReport {
  std::size_t curve_count = 0;
  int largest = 30;
  double min_delta_largest = 0.0;  // over all pairs among the largest curves
  double min_delta = 0.0;          // also over nearest-neighbour pairs of the rest
  double q10 = 0.0;
  double median = 0.0;
  double q90 = 0.0;
  std::vector<SeparationPair> pairs;
};

// Relative separation of the curves (assumed sorted largest first): all pairs
// among the `largest` first curves, plus each remaining curve against its
// spatial-hash neighbours. Below 200 curves every pair is measured.
SeparationReport separation_report(const std::vector<Curve>& curves, int largest = 30);

// Smallest chordal distance between the curve vertices and the tails
// (iterates tail_start .. tail_start + tail_len) of the critical orbits that
// do not escape. +inf when no such orbit or no curve exists.
double critical_accumulation_distance(const FamilyInstance& inst, const AttractorSet& attractors,
                                      const std::vector<Curve>& curves, int tail_start = 1000,
                                      int tail_len = 200, int budget = 10000);

}  // namespace bubbles

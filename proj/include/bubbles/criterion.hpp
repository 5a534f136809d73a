#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bubbles/topology.hpp"

namespace bubbles {

enum class TopologyClass { CantorBubbles, CantorCirclesLike, CantorLike, ConnectedLike, Unknown };
enum class TriState { Yes, No, Inconclusive };

std::string to_string(TopologyClass c);
std::string to_string(TriState t);

struct Evidence {
  TriState value = TriState::Inconclusive;
  std::vector<std::string> notes;
};

struct PreimageWitness {
  cplx sample;
  ExtComplex preimage;
  int landed_in = -1;  // component holding the preimage, or the one around a Julia speck
  bool speck = false;  // preimage sits on a small Julia cluster enclosed by `landed_in`
};

struct InvarianceResult {
  TriState value = TriState::Inconclusive;
  int samples = 0;
  int preimages_inside = 0;
  int preimages_unresolved = 0;
  std::vector<PreimageWitness> witnesses;  // preimages found outside the component
};

struct CriterionVerdict {
  int u_id = -1;  // -1: absent
  int v_id = -1;
  Evidence u_completely_invariant;
  Evidence v_not_completely_invariant;
  Evidence critical_values_in_uv;
  TopologyClass topology_class = TopologyClass::Unknown;
  double undecided_fraction = 0.0;
  double undecided_limit = 0.05;
  int multiply_connected = 0;
  int simply_connected = 0;
  std::size_t residue_pixels = 0;
  std::size_t julia_clusters = 0;
  int shared_filled_regions = 0;
  // Periodic cycles of period >= 2 whose points share one non-escaping region.
  std::vector<std::string> basilica_witnesses;

  bool all_hypotheses_hold() const {
    return u_completely_invariant.value == TriState::Yes && v_not_completely_invariant.value == TriState::Yes &&
           critical_values_in_uv.value == TriState::Yes;
  }
};

// Thresholds of the topology classifier.
struct TopologyLimits {
  double undecided = 0.05;
};

TopologyClass classify_topology(const ComponentGraph& graph, double undecided_fraction,
                                const TopologyLimits& limits = {});

// Preimages of deep samples of component `id`: Yes when all land in it, No
// with witnesses when some land in (or on a speck enclosed by) another
// component, Inconclusive otherwise.
InvarianceResult complete_invariance_test(const RationalMap& f, const ClassificationGrid& grid,
                                          const ComponentGraph& graph, const AttractorSet& attractors, int id,
                                          int n_samples = 16, std::uint64_t seed = 1);

struct CriterionOptions {
  int samples = 16;
  std::uint64_t seed = 1;
  int min_depth = 3;
  float strong = 0.125f;
  double undecided_limit = 0.05;
  // Parabolic basins converge slowly near their boundary.
  double parabolic_undecided_limit = 0.10;
  RenderOptions render;
};

struct CriterionRun {
  AttractorSet attractors;
  ClassificationGrid grid;
  ComponentGraph graph;
  CriterionVerdict verdict;
};

// find_attractors, render, label, map edges, then the hypotheses and the verdict.
CriterionRun run_criterion(const FamilyInstance& inst, const Window& window, int budget,
                           const CriterionOptions& opts = {});
// Same, on the window resized to resolution x resolution pixels.
CriterionVerdict criterion_verdict(const FamilyInstance& inst, const Window& window, int resolution, int budget,
                                   const CriterionOptions& opts = {});

}  // namespace bubbles

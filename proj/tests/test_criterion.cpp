#include "bubbles/criterion.hpp"
#include "doctest.h"

using namespace bubbles;

namespace {

const cplx kBubbleA(0.06, 1.31);

CriterionRun run(const std::string& family, const Params& params, cplx center, double width, int n,
                 int budget = 10000) {
  return run_criterion(make_family(family, params), Window::square(center, width, n), budget);
}

bool consistent(const CriterionVerdict& v) {
  if (!v.all_hypotheses_hold()) return true;
  return v.topology_class == TopologyClass::CantorBubbles || v.topology_class == TopologyClass::Unknown;
}

}  // namespace

TEST_CASE("names") {
  CHECK(to_string(TopologyClass::CantorBubbles) == "CantorBubbles");
  CHECK(to_string(TopologyClass::CantorCirclesLike) == "CantorCirclesLike");
  CHECK(to_string(TriState::Inconclusive) == "inconclusive");
  CHECK(to_string(TriState::Yes) == "yes");
}

TEST_CASE("outside of the unit disk is completely invariant") {
  const auto inst = make_family("power", {{"n", 2.0}});
  const auto set = find_attractors(inst);
  const auto grid = render_grid(inst, Window::square(0.0, 4.0, 256), set, 1000);
  const auto graph = label_components(grid);
  const auto r = complete_invariance_test(inst.map, grid, graph, set, graph.infinity_component);
  CHECK(r.value == TriState::Yes);
  CHECK(r.witnesses.empty());
  CHECK(r.preimages_inside > 0);
  const int disk = graph.component_at(cplx(0.0, 0.0));
  CHECK(complete_invariance_test(inst.map, grid, graph, set, disk).value == TriState::Yes);
}

TEST_CASE("basin of 0 of the bubble cubic has preimages elsewhere") {
  const auto inst = make_family("cubic_bubble", {{"a", kBubbleA}});
  const auto set = find_attractors(inst);
  const auto grid = render_grid(inst, Window::square(cplx(0.0, -0.7), 3.6, 512), set, 10000);
  auto graph = label_components(grid);
  const int zero = graph.component_at(cplx(0.0, 0.0));
  const auto r = complete_invariance_test(inst.map, grid, graph, set, zero);
  CHECK(r.value == TriState::No);
  REQUIRE_FALSE(r.witnesses.empty());
  for (const auto& w : r.witnesses) {
    CHECK(w.landed_in != zero);
    CHECK(w.landed_in >= 0);
    CHECK_FALSE(graph.components[w.landed_in].contains_infinity);
  }
}

TEST_CASE("g_cubic a=5/2: the component of 0 is not completely invariant") {
  const auto inst = make_family("g_cubic", {{"a", 2.5}});
  const auto set = find_attractors(inst);
  const auto grid = render_grid(inst, Window::square(1.25, 4.0, 512), set, 10000);
  const auto graph = label_components(grid);
  const auto r = complete_invariance_test(inst.map, grid, graph, set, graph.component_at(cplx(0.0, 0.0)));
  CHECK(r.value == TriState::No);
}

TEST_CASE("bubble cubic verdict") {
  const auto r = run("cubic_bubble", {{"a", kBubbleA}}, cplx(0.0, -0.7), 3.6, 512);
  const auto& v = r.verdict;
  CHECK(v.topology_class == TopologyClass::CantorBubbles);
  CHECK(v.u_completely_invariant.value == TriState::Yes);
  CHECK(v.v_not_completely_invariant.value == TriState::Yes);
  CHECK(v.critical_values_in_uv.value == TriState::Yes);
  CHECK(v.all_hypotheses_hold());
  REQUIRE(v.u_id >= 0);
  REQUIRE(v.v_id >= 0);
  CHECK(r.graph.components[v.u_id].contains_infinity);
  CHECK(v.v_id == r.graph.component_at(cplx(0.0, 0.0)));
  CHECK(v.multiply_connected == 1);
  CHECK(v.simply_connected >= 2);
  CHECK(v.residue_pixels > 0);
  CHECK(v.basilica_witnesses.empty());
}

TEST_CASE("g_cubic a=1/2 is not a Cantor set with bubbles") {
  const auto r = run("g_cubic", {{"a", 0.5}}, 0.25, 3.0, 512);
  CHECK(r.verdict.topology_class != TopologyClass::CantorBubbles);
  CHECK_FALSE(r.verdict.all_hypotheses_hold());
  CHECK_FALSE(r.verdict.basilica_witnesses.empty());
  CHECK(same_component(r.grid, 0.0, 0.5));
}

TEST_CASE("g_cubic a=5/2 verdict") {
  const auto r = run("g_cubic", {{"a", 2.5}}, 1.25, 4.0, 512);
  CHECK(r.verdict.topology_class == TopologyClass::CantorBubbles);
  CHECK(r.verdict.basilica_witnesses.empty());
  CHECK(consistent(r.verdict));
}

TEST_CASE("McMullen regimes") {
  const auto small = run("mcmullen", {{"n", 3.0}, {"m", 3.0}, {"lambda", 1e-3}}, 0.0, 3.0, 512);
  CHECK(small.verdict.topology_class == TopologyClass::CantorCirclesLike);
  CHECK(small.verdict.multiply_connected >= 2);
  CHECK(consistent(small.verdict));
  const auto large = run("mcmullen", {{"n", 2.0}, {"m", 2.0}, {"lambda", 100.0}}, 0.0, 12.0, 512);
  CHECK(large.verdict.topology_class == TopologyClass::CantorLike);
  CHECK(consistent(large.verdict));
}

TEST_CASE("parabolic maps use the relaxed undecided limit") {
  const auto r = run("para_cubic", {{"a", -1.05}}, 0.0, 1200.0, 512, 100000);
  CHECK(r.verdict.undecided_limit == doctest::Approx(0.10));
  CHECK(r.verdict.undecided_fraction <= 0.10);
  CHECK(r.verdict.topology_class == TopologyClass::CantorBubbles);
  CHECK(r.verdict.all_hypotheses_hold());
  const auto bubble = run("cubic_bubble", {{"a", kBubbleA}}, cplx(0.0, -0.7), 3.6, 128);
  CHECK(bubble.verdict.undecided_limit == doctest::Approx(0.05));
}

TEST_CASE("undecided pixels demote the class") {
  const auto r = run("cubic_bubble", {{"a", kBubbleA}}, cplx(0.0, -0.7), 3.6, 512);
  CHECK(classify_topology(r.graph, 0.0) == TopologyClass::CantorBubbles);
  CHECK(classify_topology(r.graph, 0.06) == TopologyClass::Unknown);
  CHECK(classify_topology(r.graph, 0.06, {0.10}) == TopologyClass::CantorBubbles);
}

TEST_CASE("criterion_verdict renders at the requested resolution") {
  const auto inst = make_family("devaney_marotta");
  const auto v = criterion_verdict(inst, Window::square(0.0, 3.0, 64), 512, 10000);
  CHECK(v.topology_class == TopologyClass::CantorBubbles);
  CHECK(v.all_hypotheses_hold());
}

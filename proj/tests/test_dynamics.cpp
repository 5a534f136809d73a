#include <cmath>
#include <cstring>
#include <numbers>
#include <random>

#include "bubbles/dynamics.hpp"
#include "doctest.h"

using namespace bubbles;

namespace {

int count_kind(const AttractorSet& s, CycleKind k) {
  int n = 0;
  for (const auto& a : s.cycles) n += a.kind == k;
  return n;
}

bool has_point(const AttractorSet& s, CycleKind k, cplx z) {
  for (const auto& a : s.cycles) {
    if (a.kind != k) continue;
    for (const auto& p : a.cycle.points) {
      if (p.is_finite() && std::abs(p.value() - z) < 1e-8) return true;
    }
  }
  return false;
}

bool same_fate(const OrbitFate& a, const OrbitFate& b) {
  return a.kind == b.kind && a.attractor == b.attractor && a.phase == b.phase &&
         a.iterations == b.iterations && a.final_point == b.final_point &&
         std::memcmp(&a.boundary_distance, &b.boundary_distance, sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("multiplier classification") {
  const DynamicsOptions o;
  int q = 0;
  CHECK(classify_multiplier(0.0, o) == CycleKind::Superattracting);
  CHECK(classify_multiplier(0.5, o) == CycleKind::Attracting);
  CHECK(classify_multiplier(1.0, o, &q) == CycleKind::Parabolic);
  CHECK(q == 1);
  CHECK(classify_multiplier(-1.0, o, &q) == CycleKind::Parabolic);
  CHECK(q == 2);
  CHECK(classify_multiplier(cplx(0.0, 1.0), o, &q) == CycleKind::Parabolic);
  CHECK(q == 4);
  CHECK_FALSE(classify_multiplier(std::polar(1.0, 2.0 * std::numbers::pi / 5.0), o).has_value());
  CHECK_FALSE(classify_multiplier(1.5, o).has_value());
}

TEST_CASE("escape radius bounds") {
  const auto f0 = make_family("cubic_bubble", {{"a", -2.0}});
  const double r = *escape_radius(f0.map);
  for (int s = 0; s < 360; ++s) {
    const cplx z = std::polar(r, s * std::numbers::pi / 180.0);
    CHECK(std::abs(f0.map(ExtComplex(z)).value()) >= 2.0 * r);
  }
  const auto mc = make_family("mcmullen", {{"n", 3.0}, {"m", 3.0}, {"lambda", 1e-3}});
  const double rm = *escape_radius(mc.map);
  for (int s = 0; s < 360; ++s) {
    const cplx z = std::polar(rm, s * std::numbers::pi / 180.0);
    CHECK(std::abs(mc.map(ExtComplex(z)).value()) >= 2.0 * rm);
  }
  const RationalMap inv(Polynomial{1.0}, Polynomial{0.0, 0.0, 1.0});
  CHECK_FALSE(escape_radius(inv).has_value());
}

TEST_CASE("find_attractors on the catalog maps") {
  const auto bubble_map = make_family("cubic_bubble", {{"a", cplx(0.06, 1.31)}});
  const auto s2 = find_attractors(bubble_map, 10000);
  CHECK(s2.cycles.size() == 2);
  CHECK(count_kind(s2, CycleKind::Superattracting) == 2);
  CHECK(has_point(s2, CycleKind::Superattracting, 0.0));
  CHECK(s2.infinity_index >= 0);

  const auto pc = make_family("para_cubic", {{"a", -1.05}});
  const auto sp = find_attractors(pc, 10000);
  CHECK(sp.cycles.size() == 2);
  CHECK(has_point(sp, CycleKind::Parabolic, 1.0));
  CHECK(sp.cycles[sp.infinity_index].kind == CycleKind::Superattracting);

  const auto h = make_family("h_quartic", {{"a", 1.05}});
  const auto sh = find_attractors(h, 10000);
  CHECK(sh.cycles.size() == 3);
  CHECK(has_point(sh, CycleKind::Superattracting, 0.0));
  CHECK(has_point(sh, CycleKind::Parabolic, 1.05));
  CHECK(sh.escape_radius.has_value());

  // z^2 - 1: the period-2 cycle {0, -1} is found from the critical orbit alone.
  const RationalMap basilica = RationalMap::polynomial(Polynomial{-1.0, 0.0, 1.0});
  const auto sb = find_attractors(basilica, {}, {ExtComplex(0.0)}, 10000);
  CHECK(has_point(sb, CycleKind::Superattracting, -1.0));
  CHECK(has_point(sb, CycleKind::Superattracting, 0.0));

  // Attracting but not superattracting: z^2 + 0.2.
  const RationalMap q = RationalMap::polynomial(Polynomial{0.2, 0.0, 1.0});
  const auto sq = find_attractors(q, {}, {ExtComplex(0.0)}, 10000);
  CHECK(count_kind(sq, CycleKind::Attracting) == 1);
}

TEST_CASE("classify_orbit examples") {
  const auto f0 = make_family("cubic_bubble", {{"a", -2.0}});
  const auto s0 = find_attractors(f0);
  CHECK(classify_orbit(f0.map, ExtComplex(2.0), s0).kind == FateKind::Escape);
  const auto zero = classify_orbit(f0.map, ExtComplex(0.0), s0);
  CHECK(zero.kind == FateKind::Attracted);

  const auto pc = make_family("para_cubic", {{"a", -1.05}});
  const auto sp = find_attractors(pc);
  const auto fate = classify_orbit(pc.map, ExtComplex(1.575), sp, 100000);
  CHECK(fate.kind == FateKind::Parabolic);
  REQUIRE(fate.attractor >= 0);
  CHECK(std::abs(sp.cycles[fate.attractor].cycle.points[0].value() - 1.0) < 1e-9);
  CHECK(chordal_distance(fate.final_point, ExtComplex(1.0)) < 1e-3);

  const auto h = make_family("h_quartic", {{"a", 1.05}});
  const auto sh = find_attractors(h);
  CHECK(classify_orbit(h.map, ExtComplex(0.634375), sh).kind == FateKind::Escape);
  const auto fz = classify_orbit(h.map, ExtComplex(0.0), sh);
  CHECK(fz.kind == FateKind::Attracted);
  CHECK(chordal_distance(fz.final_point, ExtComplex(0.0)) < 1e-6);
}

TEST_CASE("critical orbit fates") {
  const auto pc = make_family("para_cubic", {{"a", -1.05}});
  const auto sp = find_attractors(pc);
  for (const auto& cf : critical_orbit_fates(pc, sp, 100000)) {
    if (cf.point.is_infinite()) {
      CHECK(cf.fate.kind == FateKind::Escape);
    } else {
      CHECK(cf.fate.kind == FateKind::Parabolic);
    }
  }
  const auto h = make_family("h_quartic", {{"a", 1.05}});
  const auto sh = find_attractors(h);
  for (const auto& cf : critical_orbit_fates(h, sh, 100000)) {
    const cplx z = cf.point.is_finite() ? cf.point.value() : cplx(0.0);
    if (cf.point.is_infinite() || std::abs(z - 0.634375) < 1e-9) {
      CHECK(cf.fate.kind == FateKind::Escape);
    } else if (std::abs(z) < 1e-9) {
      CHECK(cf.fate.kind == FateKind::Attracted);
    } else {
      CHECK(cf.fate.kind == FateKind::Parabolic);
    }
  }
}

TEST_CASE("fate is invariant under one iteration") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-1.6, 1.6);
  const auto bubble_map = make_family("cubic_bubble", {{"a", cplx(0.06, 1.31)}});
  const auto s2 = find_attractors(bubble_map);
  const OrbitClassifier cls(bubble_map.map, s2, 10000);
  int agree = 0;
  for (int i = 0; i < 1000; ++i) {
    const cplx z(u(rng), u(rng));
    const auto a = cls.classify(ExtComplex(z));
    const auto b = cls.classify(bubble_map.map(ExtComplex(z)));
    agree += a.kind == b.kind && a.attractor == b.attractor;
  }
  CHECK(agree == 1000);
}

TEST_CASE("no parabolic verdicts without a parabolic cycle") {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (const cplx c : {cplx(0.0), cplx(-0.3, 0.2), cplx(0.2, 0.3), cplx(-0.5, 0.0), cplx(0.1, -0.5)}) {
    const RationalMap q = RationalMap::polynomial(Polynomial{c, 0.0, 1.0});
    const auto s = find_attractors(q, {}, {ExtComplex(0.0)}, 10000);
    CHECK_FALSE(s.has_parabolic());
    const OrbitClassifier cls(q, s, 10000);
    for (int i = 0; i < 200; ++i) {
      CHECK(cls.classify(ExtComplex(cplx(u(rng), u(rng)))).kind != FateKind::Parabolic);
    }
  }
}

TEST_CASE("potential") {
  const auto cube = RationalMap::polynomial(Polynomial::monomial(3));
  CHECK(std::abs(potential(cube, 8.0) - std::log(8.0)) < 1e-12);
  const auto f0 = make_family("cubic_bubble", {{"a", -2.0}});
  CHECK(potential(f0.map, 0.0) == 0.0);
  CHECK(std::abs(potential(f0.map, -4.0) - 3.0 * potential(f0.map, 2.0)) <= 1e-9);
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  for (int i = 0; i < 200; ++i) {
    const cplx z(u(rng), u(rng));
    const double g = potential(f0.map, z);
    if (g == 0.0) continue;
    CHECK(std::abs(potential(f0.map, f0.map(ExtComplex(z)).value()) - 3.0 * g) <= 1e-9);
  }
}

TEST_CASE("scalar and AVX2 kernels agree bit for bit") {
  if (!avx2_available()) return;
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  const char* names[] = {"cubic_bubble", "devaney_marotta", "mcmullen", "para_cubic", "g_cubic"};
  for (const char* name : names) {
    const auto inst = make_family(name);
    const auto set = find_attractors(inst);
    const OrbitClassifier cls(inst.map, set, 3000);
    std::vector<cplx> seeds(999);
    for (auto& z : seeds) z = cplx(u(rng), u(rng));
    std::vector<OrbitFate> a(seeds.size()), b(seeds.size());
    cls.classify_batch(seeds.data(), seeds.size(), a.data(), Kernel::Scalar);
    cls.classify_batch(seeds.data(), seeds.size(), b.data(), Kernel::Avx2);
    int same = 0;
    for (size_t i = 0; i < seeds.size(); ++i) same += same_fate(a[i], b[i]);
    INFO(name);
    CHECK(same == static_cast<int>(seeds.size()));
  }
}

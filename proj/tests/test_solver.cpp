#include <cmath>
#include <random>

#include "bubbles/errors.hpp"
#include "bubbles/solver.hpp"
#include "doctest.h"

using namespace bubbles;

namespace {

const double kGolden = 2.0 + (std::sqrt(5.0) - 1.0) / 2.0;

}  // namespace

TEST_CASE("verify_superattracting") {
  const auto g = make_family("g_cubic", {{"a", 2.5}});
  const auto c = verify_superattracting(g.map, ExtComplex(0.0), 2);
  CHECK(c.ok);
  CHECK(c.exact_period == 2);
  CHECK(std::abs(c.multiplier) < 1e-12);

  const auto f3 = make_family("solver_cubic", {{"v", 3.0}});
  CHECK(verify_superattracting(f3.map, ExtComplex(1.0), 1).ok);
  const auto twice = verify_superattracting(f3.map, ExtComplex(1.0), 2);
  CHECK_FALSE(twice.ok);
  CHECK(twice.exact_period == 1);

  // 2 is fixed by z^2 - 2 but repelling.
  const auto cheb = make_family("quadratic", {{"c", -2.0}});
  CHECK_FALSE(verify_superattracting(cheb.map, ExtComplex(2.0), 1).ok);
}

TEST_CASE("period one") {
  const auto r = solve_superattracting(1, 2.5);
  CHECK(r.parameter == cplx(3.0, 0.0));
  CHECK(r.residual <= 1e-12);
  CHECK(r.cycle.period == 1);
  CHECK(r.other_critical_fate.kind == FateKind::Escape);
}

TEST_CASE("period two") {
  const auto r = solve_superattracting(2, 2.5);
  CHECK(std::abs(r.parameter - kGolden) <= 1e-9);
  CHECK(r.newton_iters <= 20);
  REQUIRE(r.cycle.points.size() == 2);
  CHECK(std::abs(r.cycle.points[1].value() - (kGolden - 2.0)) < 1e-9);
  const auto f = make_family("solver_cubic", {{"v", r.parameter}});
  CHECK(verify_superattracting(f.map, ExtComplex(1.0), 2).ok);

  const auto other = solve_superattracting(2, 0.4);
  CHECK(std::abs(other.parameter - (2.0 + (-1.0 - std::sqrt(5.0)) / 2.0)) <= 1e-9);
}

TEST_CASE("period two from random starts near 2.6") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int tried = 0;
  while (tried < 10) {
    const cplx d(u(rng), u(rng));
    if (std::abs(d) >= 1.0) continue;
    ++tried;
    const auto r = solve_superattracting(2, 2.6 + 0.3 * d);
    CHECK(std::abs(r.parameter - kGolden) <= 1e-9);
    CHECK(r.residual <= 1e-9);
    CHECK(r.newton_iters <= 20);
  }
}

TEST_CASE("solver failures") {
  CHECK_THROWS_AS(solve_superattracting(0, 2.5), NoConvergenceError);
  SolveOptions o;
  o.max_iters = 1;
  CHECK_THROWS_AS(solve_superattracting(3, cplx(40.0, 40.0), o), NoConvergenceError);
}

TEST_CASE("chained criterion") {
  SolveOptions o;
  o.check_criterion = true;
  o.resolution = 384;
  const auto r = solve_superattracting(1, 2.5, o);
  REQUIRE(r.verdict.has_value());
  REQUIRE(r.window.has_value());
  CHECK(r.window->contains(cplx(1.0, 0.0)));
  CHECK(r.verdict->topology_class == TopologyClass::CantorBubbles);
  const auto two = solve_superattracting(2, 2.5, o);
  REQUIRE(two.verdict.has_value());
  CHECK(two.verdict->topology_class != TopologyClass::CantorCirclesLike);
  CHECK(two.verdict->topology_class != TopologyClass::CantorLike);
}

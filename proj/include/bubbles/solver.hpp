#pragma once

#include <optional>

#include "bubbles/criterion.hpp"

namespace bubbles {

struct SuperattractingCheck {
  bool ok = false;
  int exact_period = 0;  // 0 when the orbit does not return within p steps
  cplx multiplier{0.0, 0.0};
};

// True iff f^p(point) returns to point within tol (chordal), the exact period
// is p and the cycle multiplier is at most tol in modulus.
SuperattractingCheck verify_superattracting(const RationalMap& f, ExtComplex point, int p, double tol = 1e-9);

struct SolveOptions {
  int max_iters = 50;
  double tol = 1e-12;  // residual |f_v^p(1) - 1| accepted as converged
  // Chain the criterion on a window enclosing the filled Julia set.
  bool check_criterion = false;
  int resolution = 512;
  int budget = 10000;
  CriterionOptions criterion;
};

struct SolveResult {
  cplx parameter;
  double residual = 0.0;
  int newton_iters = 0;
  Cycle cycle;  // through the marked critical point 1
  OrbitFate other_critical_fate;  // fate of -1
  std::optional<CriterionVerdict> verdict;
  std::optional<Window> window;  // where the verdict was computed
};

// Newton on v -> f_v^p(1) - 1 for f_v(z) = z^3 - 3z + v, central-difference
// derivative and step halving. Throws NoConvergenceError, and WrongPeriodError
// when the root belongs to a lower period.
SolveResult solve_superattracting(int p, cplx v0, const SolveOptions& opts = {});

}  // namespace bubbles

#pragma once

#include <cstdint>
#include <vector>

#include "bubbles/polynomial.hpp"

namespace bubbles {

struct Root {
  cplx value;
  int multiplicity = 1;
};

struct RootOptions {
  Tolerances tol{};
  int max_sweeps = 800;
  // Seed for the angular offsets of the initial circles; fixed so results are
  // reproducible.
  std::uint64_t seed = 0x5eed'c0de'b0bb'1e5ULL;
  // Relative derivative threshold used to confirm a wider cluster as a single
  // multiple root (see poly_roots).
  double multiplicity_check = 1e-6;
};

// All roots of p (deg p >= 1) by Aberth-Ehrlich simultaneous iteration.
//
// Initial guesses lie on circles whose radii come from the upper convex hull of
// (i, log|c_i|) (the Newton polygon), each circle bounded by the Cauchy bound,
// with seeded random angular offsets. Exact zero roots are split off first.
// Converged roots satisfy |p(r)| <= tol.root * sum |c_i| |r|^i.
//
// Roots closer than tol.cluster are merged; wider clusters are merged into a
// root of multiplicity k only when p, p', ..., p^(k-1) all vanish (to within
// `multiplicity_check` of their natural scale) at the cluster mean after it is
// refined by Newton on p^(k-1).
//
// Throws NoConvergenceError when the sweep budget is exhausted.
std::vector<Root> poly_roots(const Polynomial& p, const RootOptions& opts = {});

// Roots repeated according to multiplicity.
std::vector<cplx> expand(const std::vector<Root>& roots);

}  // namespace bubbles

#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bubbles/families.hpp"
#include "bubbles/rational_map.hpp"

namespace bubbles {

struct DynamicsOptions {
  double super_tol = 1e-9;       // |multiplier| below this is superattracting
  double trap_eps = 1e-6;        // chordal radius for "attracted"
  double parabolic_eps = 1e-3;   // chordal radius of the parabolic check ball
  int parabolic_window = 200;    // W
  double parabolic_rate = 0.05;  // ratio over W must exceed (1 - rate)^W
  double parabolic_tol = 1e-6;   // |multiplier - root of unity| for a parabolic tag
  int max_root_order = 4;        // q_max
};

enum class CycleKind { Superattracting, Attracting, Parabolic };

struct Attractor {
  Cycle cycle;
  CycleKind kind = CycleKind::Attracting;
  // Order q of the root of unity for parabolic cycles (1 for multiplier 1).
  int root_order = 1;
  // Per cycle point: plane radius r such that f^p maps D(pt, r) into
  // D(pt, k r) with k = (1 + |multiplier|)/2, checked on a circle sample.
  // 0 for infinity (the escape radius plays that role) and parabolic cycles.
  std::vector<double> trap_radius;
  // Superattracting cycles: local degree k of the return map and, per point,
  // |c|^(1/(k-1)) where the return map is zeta + c w^k + ... near the point.
  int local_degree = 1;
  std::vector<double> bottcher_scale;
};

struct AttractorSet {
  std::vector<Attractor> cycles;
  std::optional<double> escape_radius;  // present when infinity is superattracting
  int infinity_index = -1;              // index of the infinity cycle, or -1

  bool has_parabolic() const;
};

enum class FateKind { Escape, Attracted, Parabolic, Undecided };

std::string to_string(FateKind k);
std::string to_string(CycleKind k);

struct OrbitFate {
  FateKind kind = FateKind::Undecided;
  int attractor = -1;  // index into AttractorSet::cycles
  int phase = 0;       // which point of the cycle the seed's immediate basin belongs to
  int iterations = 0;
  ExtComplex final_point;
  // Estimated plane distance from the seed to the Julia set (0 when unknown or
  // Undecided, +inf for seeds exactly on a pole or critical point).
  double boundary_distance = 0.0;
};

// Classify multipliers: superattracting, attracting, parabolic (returns the
// root-of-unity order through `root_order`) or none.
std::optional<CycleKind> classify_multiplier(cplx m, const DynamicsOptions& opts, int* root_order = nullptr);

// Attracting/superattracting/parabolic cycles of the map: the family's known
// cycles, cycles found from critical orbits (refined by Newton on f^p(z) - z),
// and parabolic cycles among periodic points of low period.
AttractorSet find_attractors(const FamilyInstance& inst, int budget = 10000,
                             const DynamicsOptions& opts = {});
AttractorSet find_attractors(const RationalMap& f, const std::vector<Cycle>& known,
                             const std::vector<ExtComplex>& critical, int budget = 10000,
                             const DynamicsOptions& opts = {});

// Radius where |f(z)| >= 2|z| for all |z| >= radius; nullopt when infinity is
// not superattracting.
std::optional<double> escape_radius(const RationalMap& f);

enum class Kernel { Auto, Scalar, Avx2 };

// The kernel Auto resolves to on this machine (honours BUBBLES_KERNEL=scalar|avx2).
Kernel resolve_kernel(Kernel k);
bool avx2_available();

// Reusable per-map classifier; immutable and thread-safe after construction.
class OrbitClassifier {
 public:
  OrbitClassifier(const RationalMap& f, const AttractorSet& attractors, int budget,
                  const DynamicsOptions& opts = {});
  ~OrbitClassifier();
  OrbitClassifier(const OrbitClassifier&) = delete;
  OrbitClassifier& operator=(const OrbitClassifier&) = delete;

  OrbitFate classify(ExtComplex z0) const;
  // Classifies n finite seeds; the fast wander phase uses the requested kernel.
  void classify_batch(const cplx* seeds, std::size_t n, OrbitFate* out, Kernel kernel = Kernel::Auto) const;

  int budget() const { return budget_; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  int budget_;
};

// Single-seed convenience wrapper around OrbitClassifier.
OrbitFate classify_orbit(const RationalMap& f, ExtComplex z0, const AttractorSet& attractors,
                         int budget = 10000, const DynamicsOptions& opts = {});

struct CriticalFate {
  ExtComplex point;
  int local_degree = 2;
  OrbitFate fate;
};

std::vector<CriticalFate> critical_orbit_fates(const FamilyInstance& inst, const AttractorSet& attractors,
                                               int budget = 10000, const DynamicsOptions& opts = {});

// Green's function of a polynomial: d^-k (log|f^k(z)| + log|lead| / (d - 1)),
// taken once |f^k(z)| is large enough that the correction term is below
// rounding. 0 when the orbit does not escape within k_max.
double potential(const RationalMap& f, cplx z, int k_max = 1000);

}  // namespace bubbles

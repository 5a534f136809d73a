#include "orbit_kernel.hpp"

// Fallback used when the AVX2 kernel is not built.
namespace bubbles::kernels {

bool avx2_compiled() { return false; }

void wander_avx2(const OrbitProgram& prog, WanderState* states, std::size_t n, std::int32_t budget) {
  wander_scalar(prog, states, n, budget);
}

}  // namespace bubbles::kernels

#include "orbit_kernel.hpp"

namespace bubbles::kernels {

void wander_scalar(const OrbitProgram& prog, WanderState* states, std::size_t n, std::int32_t budget) {
  for (std::size_t s = 0; s < n; ++s) {
    WanderState& st = states[s];
    double zr = st.zr, zi = st.zi, dr = st.dr, di = st.di;
    std::int32_t iter = st.iter;
    std::int32_t target = -1;
    std::int32_t ev;
    for (;;) {
      ev = check(prog, zr, zi, &target);
      if (ev != kNone) break;
      if (iter >= budget) {
        ev = kBudget;
        break;
      }
      step(prog, zr, zi, dr, di);
      ++iter;
    }
    st.zr = zr;
    st.zi = zi;
    st.dr = dr;
    st.di = di;
    st.iter = iter;
    st.event = ev;
    st.target = target;
  }
}

}  // namespace bubbles::kernels

#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace bubbles::kernels {

enum Event : std::int32_t {
  kNone = 0,
  kEscape = 1,
  kTrap = 2,
  kBudget = 3,
  kNonFinite = 4,
};

// Flattened map plus stopping targets for the wander loop. Coefficients are in
// descending degree order (index 0 is the leading coefficient).
struct OrbitProgram {
  bool polynomial = true;
  std::vector<double> pr, pi;
  std::vector<double> qr, qi;
  double escape_r2 = 0.0;  // <= 0: no escape test
  std::vector<double> tr, ti, tr2;
};

struct WanderState {
  double zr, zi;
  double dr, di;  // derivative of the iterate with respect to the seed
  std::int32_t iter;
  std::int32_t event;
  std::int32_t target;
  std::int32_t pad;
};

// Largest |z|^2 still treated as finite.
constexpr double kFiniteLimit = 1e280;

// z <- f(z), dz <- f'(z) dz. Every kernel performs exactly these operations in
// this order so that results agree bit for bit.
inline void step(const OrbitProgram& prog, double& zr, double& zi, double& dr, double& di) {
  const std::size_t np = prog.pr.size();
  double p_r = prog.pr[0], p_i = prog.pi[0];
  double dp_r = 0.0, dp_i = 0.0;
  for (std::size_t k = 1; k < np; ++k) {
    const double t_r = dp_r * zr - dp_i * zi + p_r;
    const double t_i = dp_r * zi + dp_i * zr + p_i;
    const double u_r = p_r * zr - p_i * zi + prog.pr[k];
    const double u_i = p_r * zi + p_i * zr + prog.pi[k];
    dp_r = t_r;
    dp_i = t_i;
    p_r = u_r;
    p_i = u_i;
  }
  double f_r = p_r, f_i = p_i, g_r = dp_r, g_i = dp_i;
  if (!prog.polynomial) {
    const std::size_t nq = prog.qr.size();
    double q_r = prog.qr[0], q_i = prog.qi[0];
    double dq_r = 0.0, dq_i = 0.0;
    for (std::size_t k = 1; k < nq; ++k) {
      const double t_r = dq_r * zr - dq_i * zi + q_r;
      const double t_i = dq_r * zi + dq_i * zr + q_i;
      const double u_r = q_r * zr - q_i * zi + prog.qr[k];
      const double u_i = q_r * zi + q_i * zr + prog.qi[k];
      dq_r = t_r;
      dq_i = t_i;
      q_r = u_r;
      q_i = u_i;
    }
    const double den = q_r * q_r + q_i * q_i;
    f_r = (p_r * q_r + p_i * q_i) / den;
    f_i = (p_i * q_r - p_r * q_i) / den;
    // f' = (P' - f Q') / Q
    const double s_r = dp_r - (f_r * dq_r - f_i * dq_i);
    const double s_i = dp_i - (f_r * dq_i + f_i * dq_r);
    g_r = (s_r * q_r + s_i * q_i) / den;
    g_i = (s_i * q_r - s_r * q_i) / den;
  }
  const double ndr = g_r * dr - g_i * di;
  const double ndi = g_r * di + g_i * dr;
  zr = f_r;
  zi = f_i;
  dr = ndr;
  di = ndi;
}

// Stopping test at z. Precedence: non-finite, escape, traps in index order.
inline std::int32_t check(const OrbitProgram& prog, double zr, double zi, std::int32_t* target) {
  const double m2 = zr * zr + zi * zi;
  if (!(m2 <= kFiniteLimit)) return kNonFinite;
  if (prog.escape_r2 > 0.0 && m2 > prog.escape_r2) return kEscape;
  const std::size_t nt = prog.tr.size();
  for (std::size_t t = 0; t < nt; ++t) {
    const double dx = zr - prog.tr[t];
    const double dy = zi - prog.ti[t];
    if (dx * dx + dy * dy < prog.tr2[t]) {
      *target = static_cast<std::int32_t>(t);
      return kTrap;
    }
  }
  return kNone;
}

// Iterate every state until it hits an event or `budget` iterations.
void wander_scalar(const OrbitProgram& prog, WanderState* states, std::size_t n, std::int32_t budget);
void wander_avx2(const OrbitProgram& prog, WanderState* states, std::size_t n, std::int32_t budget);

bool avx2_compiled();

}  // namespace bubbles::kernels

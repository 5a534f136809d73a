#include "orbit_kernel.hpp"

#include <immintrin.h>

namespace bubbles::kernels {
namespace {

struct Vec {
  __m256d v;
};

struct Lanes {
  __m256d zr, zi, dr, di, it;
};

inline __m256d cmul_re(__m256d ar, __m256d ai, __m256d br, __m256d bi) {
  return _mm256_sub_pd(_mm256_mul_pd(ar, br), _mm256_mul_pd(ai, bi));
}

inline __m256d cmul_im(__m256d ar, __m256d ai, __m256d br, __m256d bi) {
  return _mm256_add_pd(_mm256_mul_pd(ar, bi), _mm256_mul_pd(ai, br));
}

// Vector transcription of step(); the operation order matches it exactly.
inline void step4(const OrbitProgram& prog, const Vec* cpr, const Vec* cpi,
                  const Vec* cqr, const Vec* cqi, Lanes& v) {
  const std::size_t np = prog.pr.size();
  const __m256d zr = v.zr, zi = v.zi;
  __m256d p_r = cpr[0].v, p_i = cpi[0].v;
  __m256d dp_r = _mm256_setzero_pd(), dp_i = _mm256_setzero_pd();
  for (std::size_t k = 1; k < np; ++k) {
    const __m256d t_r = _mm256_add_pd(cmul_re(dp_r, dp_i, zr, zi), p_r);
    const __m256d t_i = _mm256_add_pd(cmul_im(dp_r, dp_i, zr, zi), p_i);
    const __m256d u_r = _mm256_add_pd(cmul_re(p_r, p_i, zr, zi), cpr[k].v);
    const __m256d u_i = _mm256_add_pd(cmul_im(p_r, p_i, zr, zi), cpi[k].v);
    dp_r = t_r;
    dp_i = t_i;
    p_r = u_r;
    p_i = u_i;
  }
  __m256d f_r = p_r, f_i = p_i, g_r = dp_r, g_i = dp_i;
  if (!prog.polynomial) {
    const std::size_t nq = prog.qr.size();
    __m256d q_r = cqr[0].v, q_i = cqi[0].v;
    __m256d dq_r = _mm256_setzero_pd(), dq_i = _mm256_setzero_pd();
    for (std::size_t k = 1; k < nq; ++k) {
      const __m256d t_r = _mm256_add_pd(cmul_re(dq_r, dq_i, zr, zi), q_r);
      const __m256d t_i = _mm256_add_pd(cmul_im(dq_r, dq_i, zr, zi), q_i);
      const __m256d u_r = _mm256_add_pd(cmul_re(q_r, q_i, zr, zi), cqr[k].v);
      const __m256d u_i = _mm256_add_pd(cmul_im(q_r, q_i, zr, zi), cqi[k].v);
      dq_r = t_r;
      dq_i = t_i;
      q_r = u_r;
      q_i = u_i;
    }
    const __m256d den = _mm256_add_pd(_mm256_mul_pd(q_r, q_r), _mm256_mul_pd(q_i, q_i));
    f_r = _mm256_div_pd(_mm256_add_pd(_mm256_mul_pd(p_r, q_r), _mm256_mul_pd(p_i, q_i)), den);
    f_i = _mm256_div_pd(_mm256_sub_pd(_mm256_mul_pd(p_i, q_r), _mm256_mul_pd(p_r, q_i)), den);
    const __m256d s_r = _mm256_sub_pd(dp_r, cmul_re(f_r, f_i, dq_r, dq_i));
    const __m256d s_i = _mm256_sub_pd(dp_i, _mm256_add_pd(_mm256_mul_pd(f_r, dq_i), _mm256_mul_pd(f_i, dq_r)));
    g_r = _mm256_div_pd(_mm256_add_pd(_mm256_mul_pd(s_r, q_r), _mm256_mul_pd(s_i, q_i)), den);
    g_i = _mm256_div_pd(_mm256_sub_pd(_mm256_mul_pd(s_i, q_r), _mm256_mul_pd(s_r, q_i)), den);
  }
  const __m256d ndr = cmul_re(g_r, g_i, v.dr, v.di);
  const __m256d ndi = _mm256_add_pd(_mm256_mul_pd(g_r, v.di), _mm256_mul_pd(g_i, v.dr));
  v.zr = f_r;
  v.zi = f_i;
  v.dr = ndr;
  v.di = ndi;
}

}  // namespace

bool avx2_compiled() { return true; }

void wander_avx2(const OrbitProgram& prog, WanderState* states, std::size_t n, std::int32_t budget) {
  const std::size_t np = prog.pr.size();
  const std::size_t nq = prog.qr.size();
  const std::size_t nt = prog.tr.size();
  std::vector<Vec> cpr(np), cpi(np), cqr(nq), cqi(nq), ctr(nt), cti(nt), ctr2(nt);
  for (std::size_t k = 0; k < np; ++k) {
    cpr[k].v = _mm256_set1_pd(prog.pr[k]);
    cpi[k].v = _mm256_set1_pd(prog.pi[k]);
  }
  for (std::size_t k = 0; k < nq; ++k) {
    cqr[k].v = _mm256_set1_pd(prog.qr[k]);
    cqi[k].v = _mm256_set1_pd(prog.qi[k]);
  }
  for (std::size_t t = 0; t < nt; ++t) {
    ctr[t].v = _mm256_set1_pd(prog.tr[t]);
    cti[t].v = _mm256_set1_pd(prog.ti[t]);
    ctr2[t].v = _mm256_set1_pd(prog.tr2[t]);
  }
  const __m256d limit = _mm256_set1_pd(kFiniteLimit);
  const __m256d esc = _mm256_set1_pd(prog.escape_r2);
  const bool has_escape = prog.escape_r2 > 0.0;
  const __m256d vbudget = _mm256_set1_pd(static_cast<double>(budget));
  const __m256d one = _mm256_set1_pd(1.0);

  alignas(32) double zr[4] = {0, 0, 0, 0}, zi[4] = {0, 0, 0, 0};
  alignas(32) double dr[4] = {0, 0, 0, 0}, di[4] = {0, 0, 0, 0};
  alignas(32) double it[4] = {0, 0, 0, 0};
  std::int64_t slot[4] = {-1, -1, -1, -1};
  std::size_t next = 0;
  int active = 0;

  auto load = [&](int l) {
    if (next < n) {
      const WanderState& s = states[next];
      zr[l] = s.zr;
      zi[l] = s.zi;
      dr[l] = s.dr;
      di[l] = s.di;
      it[l] = static_cast<double>(s.iter);
      slot[l] = static_cast<std::int64_t>(next);
      ++next;
      active |= 1 << l;
    } else {
      zr[l] = zi[l] = dr[l] = di[l] = it[l] = 0.0;
      slot[l] = -1;
      active &= ~(1 << l);
    }
  };
  for (int l = 0; l < 4; ++l) load(l);

  Lanes v{_mm256_load_pd(zr), _mm256_load_pd(zi), _mm256_load_pd(dr), _mm256_load_pd(di), _mm256_load_pd(it)};
  while (active != 0) {
    const __m256d m2 = _mm256_add_pd(_mm256_mul_pd(v.zr, v.zr), _mm256_mul_pd(v.zi, v.zi));
    __m256d stop = _mm256_cmp_pd(m2, limit, _CMP_NLE_UQ);
    if (has_escape) stop = _mm256_or_pd(stop, _mm256_cmp_pd(m2, esc, _CMP_GT_OQ));
    for (std::size_t t = 0; t < nt; ++t) {
      const __m256d dx = _mm256_sub_pd(v.zr, ctr[t].v);
      const __m256d dy = _mm256_sub_pd(v.zi, cti[t].v);
      const __m256d d2 = _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
      stop = _mm256_or_pd(stop, _mm256_cmp_pd(d2, ctr2[t].v, _CMP_LT_OQ));
    }
    stop = _mm256_or_pd(stop, _mm256_cmp_pd(v.it, vbudget, _CMP_GE_OQ));
    const int hit = _mm256_movemask_pd(stop) & active;
    if (hit != 0) {
      _mm256_store_pd(zr, v.zr);
      _mm256_store_pd(zi, v.zi);
      _mm256_store_pd(dr, v.dr);
      _mm256_store_pd(di, v.di);
      _mm256_store_pd(it, v.it);
      for (int l = 0; l < 4; ++l) {
        if (!(hit & (1 << l))) continue;
        WanderState& s = states[slot[l]];
        std::int32_t target = -1;
        std::int32_t ev = check(prog, zr[l], zi[l], &target);
        if (ev == kNone) ev = kBudget;
        s.zr = zr[l];
        s.zi = zi[l];
        s.dr = dr[l];
        s.di = di[l];
        s.iter = static_cast<std::int32_t>(it[l]);
        s.event = ev;
        s.target = target;
        load(l);
      }
      v = Lanes{_mm256_load_pd(zr), _mm256_load_pd(zi), _mm256_load_pd(dr), _mm256_load_pd(di), _mm256_load_pd(it)};
      continue;
    }
    step4(prog, cpr.data(), cpi.data(), cqr.data(), cqi.data(), v);
    v.it = _mm256_add_pd(v.it, one);
  }
}

}  // namespace bubbles::kernels

#include <immintrin.h>

#include <cmath>

#include "compumat/simd/pair_kernel.hpp"

namespace compumat::simd {
namespace {

double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d sh = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

}  // namespace

PairSums pair_sums_avx2(const DipoleLayer& lower, const DipoleLayer& upper, double dz) {
  PairSums s;
  const std::size_t nl = lower.x.size();
  const std::size_t body = nl - nl % 4;
  const double dz2 = dz * dz;

  const __m256d vdz2 = _mm256_set1_pd(dz2);
  const __m256d vdz = _mm256_set1_pd(dz);
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d three = _mm256_set1_pd(3.0);
  const __m256d five = _mm256_set1_pd(5.0);
  const __m256d kf = _mm256_set1_pd(3.0e-7);
  const __m256d ke = _mm256_set1_pd(1.0e-7);
  const __m256d zero = _mm256_setzero_pd();

  __m256d afx = zero, afy = zero, afz = zero, aen = zero, bad = zero;
  for (std::size_t j = 0; j < upper.x.size(); ++j) {
    const __m256d ux = _mm256_set1_pd(upper.x[j]);
    const __m256d uy = _mm256_set1_pd(upper.y[j]);
    const __m256d uq = _mm256_set1_pd(upper.q[j]);
    for (std::size_t i = 0; i < body; i += 4) {
      const __m256d dx = _mm256_sub_pd(ux, _mm256_loadu_pd(lower.x.data() + i));
      const __m256d dy = _mm256_sub_pd(uy, _mm256_loadu_pd(lower.y.data() + i));
      const __m256d r2 = _mm256_fmadd_pd(dx, dx, _mm256_fmadd_pd(dy, dy, vdz2));
      bad = _mm256_or_pd(bad, _mm256_cmp_pd(r2, zero, _CMP_EQ_OQ));
      const __m256d inv_r2 = _mm256_div_pd(one, r2);
      const __m256d inv_r = _mm256_div_pd(one, _mm256_sqrt_pd(r2));
      const __m256d inv_r3 = _mm256_mul_pd(inv_r2, inv_r);
      const __m256d c2 = _mm256_mul_pd(vdz2, inv_r2);
      const __m256d ab = _mm256_mul_pd(_mm256_loadu_pd(lower.q.data() + i), uq);
      const __m256d k = _mm256_mul_pd(_mm256_mul_pd(kf, ab), _mm256_mul_pd(inv_r3, inv_r2));
      const __m256d lateral = _mm256_mul_pd(k, _mm256_fnmadd_pd(five, c2, one));
      afx = _mm256_fmadd_pd(lateral, dx, afx);
      afy = _mm256_fmadd_pd(lateral, dy, afy);
      afz = _mm256_fmadd_pd(_mm256_mul_pd(k, vdz), _mm256_fnmadd_pd(five, c2, three), afz);
      aen = _mm256_fmadd_pd(_mm256_mul_pd(_mm256_mul_pd(ke, ab), inv_r3), _mm256_fnmadd_pd(three, c2, one), aen);
    }
  }
  s.fx = hsum(afx);
  s.fy = hsum(afy);
  s.fz = hsum(afz);
  s.energy = hsum(aen);
  s.degenerate = _mm256_movemask_pd(bad) != 0;

  if (body < nl) {
    DipoleLayer tail{lower.x.subspan(body), lower.y.subspan(body), lower.q.subspan(body)};
    const PairSums t = pair_sums_scalar(tail, upper, dz);
    s.fx += t.fx;
    s.fy += t.fy;
    s.fz += t.fz;
    s.energy += t.energy;
    s.degenerate = s.degenerate || t.degenerate;
  }
  return s;
}

}  // namespace compumat::simd

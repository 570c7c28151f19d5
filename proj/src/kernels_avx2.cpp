#include <immintrin.h>

#include "tpbessel/kernels.hpp"

namespace tpbessel {

namespace {

inline double hsum(__m256d v)
{
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d sh = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

}  // namespace

void trapezoid_kernel_avx2(const KernelInput& in, cdouble z, KernelOutput& out)
{
  const __m256d zr = _mm256_set1_pd(z.real());
  const __m256d zi = _mm256_set1_pd(z.imag());
  __m256d s0r[4], s0i[4], s1r[2], s1i[2];
  for (int j = 0; j < 4; ++j) s0r[j] = s0i[j] = _mm256_setzero_pd();
  for (int j = 0; j < 2; ++j) s1r[j] = s1i[j] = _mm256_setzero_pd();
  __m256d k0r = _mm256_setzero_pd(), k0i = k0r, k1r = k0r, k1i = k0r;

  const int n4 = in.n & ~3;
  for (int k = 0; k < n4; k += 4) {
    __m256d dr = _mm256_sub_pd(_mm256_loadu_pd(in.tre + k), zr);
    __m256d di = _mm256_sub_pd(_mm256_loadu_pd(in.tim + k), zi);
    __m256d den = _mm256_fmadd_pd(dr, dr, _mm256_mul_pd(di, di));
    __m256d ir = _mm256_div_pd(dr, den);
    __m256d ii = _mm256_div_pd(_mm256_sub_pd(_mm256_setzero_pd(), di), den);
    __m256d wr = _mm256_loadu_pd(in.wre + k), wi = _mm256_loadu_pd(in.wim + k);
    __m256d gr = _mm256_fmsub_pd(wr, ir, _mm256_mul_pd(wi, ii));
    __m256d gi = _mm256_fmadd_pd(wr, ii, _mm256_mul_pd(wi, ir));
    __m256d hr = _mm256_fmsub_pd(gr, ir, _mm256_mul_pd(gi, ii));
    __m256d hi = _mm256_fmadd_pd(gr, ii, _mm256_mul_pd(gi, ir));
    k0r = _mm256_add_pd(k0r, gr);
    k0i = _mm256_add_pd(k0i, gi);
    k1r = _mm256_add_pd(k1r, hr);
    k1i = _mm256_add_pd(k1i, hi);
    for (int j = 0; j < 4; ++j) {
      __m256d fr = _mm256_loadu_pd(in.fre[j] + k), fi = _mm256_loadu_pd(in.fim[j] + k);
      s0r[j] = _mm256_add_pd(s0r[j], _mm256_fmsub_pd(fr, gr, _mm256_mul_pd(fi, gi)));
      s0i[j] = _mm256_add_pd(s0i[j], _mm256_fmadd_pd(fr, gi, _mm256_mul_pd(fi, gr)));
      if (j < 2) {
        s1r[j] = _mm256_add_pd(s1r[j], _mm256_fmsub_pd(fr, hr, _mm256_mul_pd(fi, hi)));
        s1i[j] = _mm256_add_pd(s1i[j], _mm256_fmadd_pd(fr, hi, _mm256_mul_pd(fi, hr)));
      }
    }
  }

  double r0r[4], r0i[4], r1r[2], r1i[2];
  for (int j = 0; j < 4; ++j) {
    r0r[j] = hsum(s0r[j]);
    r0i[j] = hsum(s0i[j]);
  }
  for (int j = 0; j < 2; ++j) {
    r1r[j] = hsum(s1r[j]);
    r1i[j] = hsum(s1i[j]);
  }
  double a0r = hsum(k0r), a0i = hsum(k0i), a1r = hsum(k1r), a1i = hsum(k1i);

  for (int k = n4; k < in.n; ++k) {
    double dr = in.tre[k] - z.real(), di = in.tim[k] - z.imag();
    double den = dr * dr + di * di;
    double ir = dr / den, ii = -di / den;
    double gr = in.wre[k] * ir - in.wim[k] * ii;
    double gi = in.wre[k] * ii + in.wim[k] * ir;
    double hr = gr * ir - gi * ii;
    double hi = gr * ii + gi * ir;
    a0r += gr;
    a0i += gi;
    a1r += hr;
    a1i += hi;
    for (int j = 0; j < 4; ++j) {
      double fr = in.fre[j][k], fi = in.fim[j][k];
      r0r[j] += fr * gr - fi * gi;
      r0i[j] += fr * gi + fi * gr;
      if (j < 2) {
        r1r[j] += fr * hr - fi * hi;
        r1i[j] += fr * hi + fi * hr;
      }
    }
  }

  const double inv_n = 1.0 / in.n;
  for (int j = 0; j < 4; ++j) out.s0[j] = cdouble(r0r[j], r0i[j]) * inv_n;
  for (int j = 0; j < 2; ++j) out.s1[j] = cdouble(r1r[j], r1i[j]) * inv_n;
  out.k0 = cdouble(a0r, a0i) * inv_n;
  out.k1 = cdouble(a1r, a1i) * inv_n;
}

}  // namespace tpbessel

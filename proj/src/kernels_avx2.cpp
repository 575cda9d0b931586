#include "gmkf/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cmath>
#include <cstdint>

namespace gmkf::kernels {

namespace detail {
void hermite_batch_strided(const double* x, std::size_t n, int p, double* out,
                           std::size_t ld);
}

namespace {

// exp(x) for 4 doubles: Cody-Waite argument reduction plus the classic Cephes
// rational kernel, accurate to a couple of ulp.  Inputs are clamped to
// [-708.396, 709.0]; everything this translation unit feeds it is <= 0, and
// values below the lower clamp are ~3e-308, i.e. zero for density purposes.
inline __m256d exp4(__m256d x) {
  x = _mm256_max_pd(_mm256_min_pd(x, _mm256_set1_pd(709.0)),
                    _mm256_set1_pd(-708.39641853226408));

  __m256d fx = _mm256_fmadd_pd(x, _mm256_set1_pd(1.4426950408889634073599),
                               _mm256_set1_pd(0.5));
  fx = _mm256_floor_pd(fx);

  x = _mm256_fnmadd_pd(fx, _mm256_set1_pd(6.93145751953125e-1), x);
  x = _mm256_fnmadd_pd(fx, _mm256_set1_pd(1.42860682030941723212e-6), x);

  const __m256d xx = _mm256_mul_pd(x, x);

  __m256d px = _mm256_set1_pd(1.26177193074810590878e-4);
  px = _mm256_fmadd_pd(px, xx, _mm256_set1_pd(3.02994407707441961300e-2));
  px = _mm256_fmadd_pd(px, xx, _mm256_set1_pd(9.99999999999999999910e-1));
  px = _mm256_mul_pd(px, x);

  __m256d qx = _mm256_set1_pd(3.00198505138664455042e-6);
  qx = _mm256_fmadd_pd(qx, xx, _mm256_set1_pd(2.52448340349684104192e-3));
  qx = _mm256_fmadd_pd(qx, xx, _mm256_set1_pd(2.27265548208155028766e-1));
  qx = _mm256_fmadd_pd(qx, xx, _mm256_set1_pd(2.00000000000000000005e0));

  __m256d e = _mm256_div_pd(px, _mm256_sub_pd(qx, px));
  e = _mm256_fmadd_pd(_mm256_set1_pd(2.0), e, _mm256_set1_pd(1.0));

  // Scale by 2^fx through the exponent field; fx stays within [-1022, 1023]
  // for clamped inputs, so no overflow into inf/denormal handling is needed.
  __m128i n32 = _mm256_cvtpd_epi32(fx);
  __m256i n64 = _mm256_cvtepi32_epi64(n32);
  n64 = _mm256_slli_epi64(_mm256_add_epi64(n64, _mm256_set1_epi64x(1023)), 52);
  return _mm256_mul_pd(e, _mm256_castsi256_pd(n64));
}

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

} // namespace

void hermite_batch_avx2(const double* x, std::size_t n, int p, double* out) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d xv = _mm256_loadu_pd(x + i);
    __m256d hm = _mm256_set1_pd(1.0);
    _mm256_storeu_pd(out + i, hm);
    if (p < 1) continue;
    __m256d hc = xv;
    _mm256_storeu_pd(out + n + i, hc);
    for (int j = 1; j < p; ++j) {
      const __m256d hn =
          _mm256_fmsub_pd(xv, hc, _mm256_mul_pd(_mm256_set1_pd(static_cast<double>(j)), hm));
      hm = hc;
      hc = hn;
      _mm256_storeu_pd(out + static_cast<std::size_t>(j + 1) * n + i, hc);
    }
  }
  if (i < n) detail::hermite_batch_strided(x + i, n - i, p, out + i, n);
}

void gauss_kde_avx2(const double* x, std::size_t n, const double* grid, std::size_t m,
                    double inv_h, double* out) {
  const __m256d vih = _mm256_set1_pd(inv_h);
  const __m256d vmh = _mm256_set1_pd(-0.5);
  for (std::size_t j = 0; j < m; ++j) {
    const __m256d g = _mm256_set1_pd(grid[j]);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
      const __m256d t = _mm256_mul_pd(_mm256_sub_pd(g, _mm256_loadu_pd(x + i)), vih);
      acc = _mm256_add_pd(acc, exp4(_mm256_mul_pd(vmh, _mm256_mul_pd(t, t))));
    }
    double sum = hsum(acc);
    for (; i < n; ++i) {
      const double t = (grid[j] - x[i]) * inv_h;
      sum += std::exp(-0.5 * t * t);
    }
    out[j] = sum;
  }
}

} // namespace gmkf::kernels

#endif // x86-64

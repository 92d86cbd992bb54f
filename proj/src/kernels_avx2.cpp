#include "focustime/kernels.hpp"

#if FOCUSTIME_HAVE_AVX2_KERNELS

#include <immintrin.h>

namespace ft::kernels::detail {

namespace {

inline double hsum_pd(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d swapped = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, swapped));
}

}  // namespace

double dot_f32_avx2(const float* a, const float* b,
                                                        std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256 av = _mm256_loadu_ps(a + i);
    __m256 bv = _mm256_loadu_ps(b + i);
    // widen to double before accumulating, matching the scalar reference
    __m256d alo = _mm256_cvtps_pd(_mm256_castps256_ps128(av));
    __m256d ahi = _mm256_cvtps_pd(_mm256_extractf128_ps(av, 1));
    __m256d blo = _mm256_cvtps_pd(_mm256_castps256_ps128(bv));
    __m256d bhi = _mm256_cvtps_pd(_mm256_extractf128_ps(bv, 1));
    acc0 = _mm256_fmadd_pd(alo, blo, acc0);
    acc1 = _mm256_fmadd_pd(ahi, bhi, acc1);
  }
  double acc = hsum_pd(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) {
    acc += static_cast<double>(a[i]) * static_cast<double>(b[i]);
  }
  return acc;
}

double dot_f64_avx2(const double* a, const double* b,
                                                        std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc);
  }
  double out = hsum_pd(acc);
  for (; i < n; ++i) {
    out += a[i] * b[i];
  }
  return out;
}

// mul+add (no fma): element i is independent, so this is bitwise identical to
// the scalar reference.
void axpy_f32_avx2(float a, const float* x, float* y,
                                                   std::size_t n) {
  const __m256 av = _mm256_set1_ps(a);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256 yv = _mm256_loadu_ps(y + i);
    yv = _mm256_add_ps(yv, _mm256_mul_ps(av, _mm256_loadu_ps(x + i)));
    _mm256_storeu_ps(y + i, yv);
  }
  for (; i < n; ++i) {
    y[i] += a * x[i];
  }
}

void weighted_accum_f64_avx2(const double* mat,
                                                                 const double* w, std::size_t n,
                                                                 std::size_t d, double* acc) {
  for (std::size_t i = 0; i < n; ++i) {
    const __m256d wv = _mm256_set1_pd(w[i]);
    const double* row = mat + i * d;
    std::size_t j = 0;
    for (; j + 4 <= d; j += 4) {
      __m256d av = _mm256_loadu_pd(acc + j);
      av = _mm256_fmadd_pd(wv, _mm256_loadu_pd(row + j), av);
      _mm256_storeu_pd(acc + j, av);
    }
    for (; j < d; ++j) {
      acc[j] += w[i] * row[j];
    }
  }
}

}  // namespace ft::kernels::detail

#endif  // FOCUSTIME_HAVE_AVX2_KERNELS

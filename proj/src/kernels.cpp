#include "focustime/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

namespace ft::kernels {

namespace {

Backend sanitize(Backend b) {
#if FOCUSTIME_HAVE_AVX2_KERNELS
  if (b == Backend::avx2 && !__builtin_cpu_supports("avx2")) return Backend::scalar;
#else
  if (b == Backend::avx2) return Backend::scalar;
#endif
  return b;
}

Backend detect_backend() {
  if (const char* env = std::getenv("FOCUSTIME_KERNELS")) {
    if (std::strcmp(env, "scalar") == 0) return Backend::scalar;
    if (std::strcmp(env, "avx2") == 0) return sanitize(Backend::avx2);
  }
#if FOCUSTIME_HAVE_AVX2_KERNELS
  if (__builtin_cpu_supports("avx2")) return Backend::avx2;
#endif
  return Backend::scalar;
}

std::atomic<Backend> g_backend{detect_backend()};

}  // namespace

Backend active_backend() { return g_backend.load(std::memory_order_relaxed); }

const char* backend_name(Backend b) { return b == Backend::avx2 ? "avx2" : "scalar"; }

void force_backend(std::optional<Backend> b) {
  g_backend.store(sanitize(b.value_or(detect_backend())), std::memory_order_relaxed);
}

double dot_f32(const float* a, const float* b, std::size_t n) {
#if FOCUSTIME_HAVE_AVX2_KERNELS
  if (active_backend() == Backend::avx2) return detail::dot_f32_avx2(a, b, n);
#endif
  return detail::dot_f32_scalar(a, b, n);
}

double dot_f64(const double* a, const double* b, std::size_t n) {
#if FOCUSTIME_HAVE_AVX2_KERNELS
  if (active_backend() == Backend::avx2) return detail::dot_f64_avx2(a, b, n);
#endif
  return detail::dot_f64_scalar(a, b, n);
}

void axpy_f32(float a, const float* x, float* y, std::size_t n) {
#if FOCUSTIME_HAVE_AVX2_KERNELS
  if (active_backend() == Backend::avx2) return detail::axpy_f32_avx2(a, x, y, n);
#endif
  detail::axpy_f32_scalar(a, x, y, n);
}

void weighted_accum_f64(const double* mat, const double* w, std::size_t n, std::size_t d,
                        double* acc) {
#if FOCUSTIME_HAVE_AVX2_KERNELS
  if (active_backend() == Backend::avx2) return detail::weighted_accum_f64_avx2(mat, w, n, d, acc);
#endif
  detail::weighted_accum_f64_scalar(mat, w, n, d, acc);
}

}  // namespace ft::kernels

#pragma once

#include <cstddef>
#include <optional>
#include <string>

// Arithmetic inner loops used by the embedding trainer and the window scorer.
//
// Every kernel has a scalar reference implementation and an AVX2 variant; the
// active variant is picked once at startup from cpuid and can be overridden
// with force_backend() or the FOCUSTIME_KERNELS environment variable
// ("scalar" / "avx2"). Accumulating kernels reduce in double regardless of
// backend, so scalar and AVX2 agree to ~1e-12 relative; axpy_f32 is
// elementwise (no reassociation) and agrees bitwise.

namespace ft::kernels {

enum class Backend { scalar, avx2 };

Backend active_backend();
const char* backend_name(Backend b);

// Test/debug hook. nullopt restores auto-detection.
void force_backend(std::optional<Backend> b);

// Dot product of two float vectors, accumulated in double.
double dot_f32(const float* a, const float* b, std::size_t n);

// Dot product of two double vectors.
double dot_f64(const double* a, const double* b, std::size_t n);

// y[i] += a * x[i]
void axpy_f32(float a, const float* x, float* y, std::size_t n);

// acc[j] += sum_i w[i] * mat[i*d + j]   (row-major mat, n rows of d)
void weighted_accum_f64(const double* mat, const double* w, std::size_t n, std::size_t d,
                        double* acc);

namespace detail {

double dot_f32_scalar(const float* a, const float* b, std::size_t n);
double dot_f64_scalar(const double* a, const double* b, std::size_t n);
void axpy_f32_scalar(float a, const float* x, float* y, std::size_t n);
void weighted_accum_f64_scalar(const double* mat, const double* w, std::size_t n, std::size_t d,
                               double* acc);

#if defined(__x86_64__) || defined(_M_X64)
#define FOCUSTIME_HAVE_AVX2_KERNELS 1
double dot_f32_avx2(const float* a, const float* b, std::size_t n);
double dot_f64_avx2(const double* a, const double* b, std::size_t n);
void axpy_f32_avx2(float a, const float* x, float* y, std::size_t n);
void weighted_accum_f64_avx2(const double* mat, const double* w, std::size_t n, std::size_t d,
                             double* acc);
#else
#define FOCUSTIME_HAVE_AVX2_KERNELS 0
#endif

}  // namespace detail

}  // namespace ft::kernels

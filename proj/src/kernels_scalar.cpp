#include "focustime/kernels.hpp"

namespace ft::kernels::detail {

double dot_f32_scalar(const float* a, const float* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    acc += static_cast<double>(a[i]) * static_cast<double>(b[i]);
  }
  return acc;
}

double dot_f64_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    acc += a[i] * b[i];
  }
  return acc;
}

void axpy_f32_scalar(float a, const float* x, float* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    y[i] += a * x[i];
  }
}

void weighted_accum_f64_scalar(const double* mat, const double* w, std::size_t n, std::size_t d,
                               double* acc) {
  for (std::size_t i = 0; i < n; ++i) {
    const double wi = w[i];
    const double* row = mat + i * d;
    for (std::size_t j = 0; j < d; ++j) {
      acc[j] += wi * row[j];
    }
  }
}

}  // namespace ft::kernels::detail

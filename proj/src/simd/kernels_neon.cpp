// AArch64 baseline NEON: two float64x2 registers cover the four stripes.
#include <arm_neon.h>

#include "itolab/simd/kernels.hpp"
#include "kernel_tables.hpp"

namespace itolab::simd {
namespace {

constexpr std::size_t kLanes = 2;

void add_product_neon(double* acc, const double* x, const double* y, std::size_t n) {
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const float64x2_t p = vmulq_f64(vld1q_f64(x + i), vld1q_f64(y + i));
    vst1q_f64(acc + i, vaddq_f64(vld1q_f64(acc + i), p));
  }
  for (; i < n; ++i) acc[i] += x[i] * y[i];
}

void add_scaled_neon(double* acc, const double* x, double c, std::size_t n) {
  const float64x2_t vc = vdupq_n_f64(c);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const float64x2_t p = vmulq_f64(vc, vld1q_f64(x + i));
    vst1q_f64(acc + i, vaddq_f64(vld1q_f64(acc + i), p));
  }
  for (; i < n; ++i) acc[i] += c * x[i];
}

void subtract_neon(double* out, const double* a, const double* b, std::size_t n) {
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) vst1q_f64(out + i, vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
  for (; i < n; ++i) out[i] = a[i] - b[i];
}

void multiply_neon(double* out, const double* x, const double* y, std::size_t n) {
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) vst1q_f64(out + i, vmulq_f64(vld1q_f64(x + i), vld1q_f64(y + i)));
  for (; i < n; ++i) out[i] = x[i] * y[i];
}

void scale_neon(double* out, const double* x, double c, std::size_t n) {
  const float64x2_t vc = vdupq_n_f64(c);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) vst1q_f64(out + i, vmulq_f64(vc, vld1q_f64(x + i)));
  for (; i < n; ++i) out[i] = c * x[i];
}

enum class Term { Value, Square, Product };

template <Term kind>
double striped(const double* x, const double* y, std::size_t n) {
  float64x2_t lo = vdupq_n_f64(0.0);  // stripes 0, 1
  float64x2_t hi = vdupq_n_f64(0.0);  // stripes 2, 3
  std::size_t i = 0;
  for (; i + kStripes <= n; i += kStripes) {
    float64x2_t a = vld1q_f64(x + i);
    float64x2_t b = vld1q_f64(x + i + 2);
    if constexpr (kind == Term::Square) {
      a = vmulq_f64(a, a);
      b = vmulq_f64(b, b);
    } else if constexpr (kind == Term::Product) {
      a = vmulq_f64(a, vld1q_f64(y + i));
      b = vmulq_f64(b, vld1q_f64(y + i + 2));
    }
    lo = vaddq_f64(lo, a);
    hi = vaddq_f64(hi, b);
  }
  double s[kStripes];
  vst1q_f64(s, lo);
  vst1q_f64(s + 2, hi);
  for (std::size_t l = 0; i < n; ++i, ++l) {
    if constexpr (kind == Term::Value) s[l] += x[i];
    else if constexpr (kind == Term::Square) s[l] += x[i] * x[i];
    else s[l] += x[i] * y[i];
  }
  return combine_stripes(s);
}

double sum_neon(const double* x, std::size_t n) { return striped<Term::Value>(x, nullptr, n); }
double sum_squares_neon(const double* x, std::size_t n) { return striped<Term::Square>(x, nullptr, n); }
double dot_neon(const double* x, const double* y, std::size_t n) { return striped<Term::Product>(x, y, n); }

constexpr KernelTable kNeon{
    "neon",     add_product_neon, add_scaled_neon,  subtract_neon, multiply_neon,
    scale_neon, sum_neon,         sum_squares_neon, dot_neon,
};

}  // namespace

const KernelTable& neon_kernels() noexcept { return kNeon; }

}  // namespace itolab::simd

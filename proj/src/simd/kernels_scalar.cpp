#include "itolab/simd/kernels.hpp"
#include "kernel_tables.hpp"

namespace itolab::simd {
namespace {

void add_product_scalar(double* acc, const double* x, const double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) acc[i] += x[i] * y[i];
}

void add_scaled_scalar(double* acc, const double* x, double c, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) acc[i] += c * x[i];
}

void subtract_scalar(double* out, const double* a, const double* b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] - b[i];
}

void multiply_scalar(double* out, const double* x, const double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i] * y[i];
}

void scale_scalar(double* out, const double* x, double c, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = c * x[i];
}

template <class Term>
double striped_sum(std::size_t n, Term term) {
  double s[kStripes] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  for (; i + kStripes <= n; i += kStripes) {
    for (std::size_t l = 0; l < kStripes; ++l) s[l] += term(i + l);
  }
  for (std::size_t l = 0; i < n; ++i, ++l) s[l] += term(i);
  return combine_stripes(s);
}

double sum_scalar(const double* x, std::size_t n) {
  return striped_sum(n, [x](std::size_t i) { return x[i]; });
}

double sum_squares_scalar(const double* x, std::size_t n) {
  return striped_sum(n, [x](std::size_t i) { return x[i] * x[i]; });
}

double dot_scalar(const double* x, const double* y, std::size_t n) {
  return striped_sum(n, [x, y](std::size_t i) { return x[i] * y[i]; });
}

constexpr KernelTable kScalar{
    "scalar",         add_product_scalar, add_scaled_scalar,  subtract_scalar,
    multiply_scalar,  scale_scalar,       sum_scalar,         sum_squares_scalar,
    dot_scalar,
};

}  // namespace

const KernelTable& scalar_kernels() noexcept { return kScalar; }

}  // namespace itolab::simd

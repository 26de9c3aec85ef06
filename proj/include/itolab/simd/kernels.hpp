#pragma once

// Row kernels over the path axis. Every kernel comes in a scalar reference
// version and optional vector versions (AVX2 on x86-64, NEON on AArch64);
// the active table is chosen once at run time.
//
// All variants produce bit-identical results: elementwise kernels perform the
// same IEEE operations per lane (no FMA contraction), and reductions use a
// fixed four-stripe accumulation order, combined as (s0 + s1) + (s2 + s3).

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace itolab::simd {

struct KernelTable {
  std::string_view name;
  // acc[i] += x[i] * y[i]
  void (*add_product)(double* acc, const double* x, const double* y, std::size_t n);
  // acc[i] += c * x[i]
  void (*add_scaled)(double* acc, const double* x, double c, std::size_t n);
  // out[i] = a[i] - b[i]
  void (*subtract)(double* out, const double* a, const double* b, std::size_t n);
  // out[i] = x[i] * y[i]
  void (*multiply)(double* out, const double* x, const double* y, std::size_t n);
  // out[i] = c * x[i]
  void (*scale)(double* out, const double* x, double c, std::size_t n);
  double (*sum)(const double* x, std::size_t n);
  double (*sum_squares)(const double* x, std::size_t n);
  double (*dot)(const double* x, const double* y, std::size_t n);
};

const KernelTable& scalar_kernels() noexcept;

/// Tables compiled into this build whose instruction set the host supports.
/// The scalar table is always first.
std::vector<const KernelTable*> available_kernels();

/// The table used by the library. Defaults to the widest available set; the
/// ITOLAB_SIMD environment variable (scalar | avx2 | neon) overrides it.
const KernelTable& active_kernels() noexcept;

/// Selects a table by name; returns false if it is not available.
bool select_kernels(std::string_view name);

// Checked span front-ends over the active table.
void add_product(std::span<double> acc, std::span<const double> x, std::span<const double> y);
void add_scaled(std::span<double> acc, std::span<const double> x, double c);
void subtract(std::span<double> out, std::span<const double> a, std::span<const double> b);
void multiply(std::span<double> out, std::span<const double> x, std::span<const double> y);
void scale(std::span<double> out, std::span<const double> x, double c);
double sum(std::span<const double> x);
double sum_squares(std::span<const double> x);
double dot(std::span<const double> x, std::span<const double> y);

}  // namespace itolab::simd

#include <atomic>
#include <cassert>
#include <cstdlib>

#include "itolab/simd/kernels.hpp"
#include "kernel_tables.hpp"

namespace itolab::simd {
namespace {

bool host_supports_avx2() {
#if defined(ITOLAB_HAVE_AVX2_KERNELS) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

const KernelTable* find(std::string_view name) {
  for (const KernelTable* table : available_kernels()) {
    if (table->name == name) return table;
  }
  return nullptr;
}

const KernelTable* initial_table() {
  if (const char* env = std::getenv("ITOLAB_SIMD")) {
    if (const KernelTable* table = find(env)) return table;
  }
  return available_kernels().back();
}

std::atomic<const KernelTable*>& active_slot() {
  static std::atomic<const KernelTable*> slot{initial_table()};
  return slot;
}

}  // namespace

std::vector<const KernelTable*> available_kernels() {
  std::vector<const KernelTable*> tables{&scalar_kernels()};
#if defined(ITOLAB_HAVE_AVX2_KERNELS)
  if (host_supports_avx2()) tables.push_back(&avx2_kernels());
#endif
#if defined(ITOLAB_HAVE_NEON_KERNELS)
  tables.push_back(&neon_kernels());
#endif
  return tables;
}

const KernelTable& active_kernels() noexcept {
  return *active_slot().load(std::memory_order_acquire);
}

bool select_kernels(std::string_view name) {
  const KernelTable* table = find(name);
  if (!table) return false;
  active_slot().store(table, std::memory_order_release);
  return true;
}

void add_product(std::span<double> acc, std::span<const double> x, std::span<const double> y) {
  assert(acc.size() == x.size() && x.size() == y.size());
  active_kernels().add_product(acc.data(), x.data(), y.data(), acc.size());
}

void add_scaled(std::span<double> acc, std::span<const double> x, double c) {
  assert(acc.size() == x.size());
  active_kernels().add_scaled(acc.data(), x.data(), c, acc.size());
}

void subtract(std::span<double> out, std::span<const double> a, std::span<const double> b) {
  assert(out.size() == a.size() && a.size() == b.size());
  active_kernels().subtract(out.data(), a.data(), b.data(), out.size());
}

void multiply(std::span<double> out, std::span<const double> x, std::span<const double> y) {
  assert(out.size() == x.size() && x.size() == y.size());
  active_kernels().multiply(out.data(), x.data(), y.data(), out.size());
}

void scale(std::span<double> out, std::span<const double> x, double c) {
  assert(out.size() == x.size());
  active_kernels().scale(out.data(), x.data(), c, out.size());
}

double sum(std::span<const double> x) { return active_kernels().sum(x.data(), x.size()); }

double sum_squares(std::span<const double> x) {
  return active_kernels().sum_squares(x.data(), x.size());
}

double dot(std::span<const double> x, std::span<const double> y) {
  assert(x.size() == y.size());
  return active_kernels().dot(x.data(), y.data(), x.size());
}

}  // namespace itolab::simd

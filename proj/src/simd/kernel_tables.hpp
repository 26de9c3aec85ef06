#pragma once

#include <cstddef>

#include "itolab/simd/kernels.hpp"

namespace itolab::simd {

inline constexpr std::size_t kStripes = 4;

inline double combine_stripes(const double* s) { return (s[0] + s[1]) + (s[2] + s[3]); }

#if defined(ITOLAB_HAVE_AVX2_KERNELS)
const KernelTable& avx2_kernels() noexcept;
#endif
#if defined(ITOLAB_HAVE_NEON_KERNELS)
const KernelTable& neon_kernels() noexcept;
#endif

}  // namespace itolab::simd

#include "itolab/brownian.hpp"

#include <cmath>

#include "itolab/error.hpp"
#include "itolab/random.hpp"
#include "itolab/simd/kernels.hpp"

namespace itolab {

BrownianEnsemble sample_brownian(const TimeGrid& grid, std::size_t paths, std::uint64_t seed,
                                 std::size_t first_path) {
  require(paths >= 1, ErrorKind::InvalidArgument, "ensemble needs at least one path");

  const std::size_t cells = grid.cells();
  BrownianEnsemble w;
  w.grid_ = grid;
  w.seed_ = seed;
  w.first_path_ = first_path;
  w.increments_ = PathMatrix(cells, paths);
  w.values_ = PathMatrix(cells + 1, paths);

  std::vector<double> root_step(cells);
  for (std::size_t k = 0; k < cells; ++k) root_step[k] = std::sqrt(grid.step(k));

  // Normal draw k of stream m drives cell k of path m.
  const StreamRng rng(seed);
  for (std::size_t k = 0; k < cells; k += 2) {
    std::span<double> even = w.increments_.row(k);
    const bool has_odd = k + 1 < cells;
    for (std::size_t m = 0; m < paths; ++m) {
      const auto [z0, z1] = rng.normal_pair(first_path + m, k / 2);
      even[m] = root_step[k] * z0;
      if (has_odd) w.increments_.at(k + 1, m) = root_step[k + 1] * z1;
    }
  }

  for (std::size_t k = 0; k < cells; ++k) {
    std::span<double> next = w.values_.row(k + 1);
    simd::scale(next, w.values_.row(k), 1.0);
    simd::add_scaled(next, w.increments_.row(k), 1.0);
  }
  return w;
}

}  // namespace itolab

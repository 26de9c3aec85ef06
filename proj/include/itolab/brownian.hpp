#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "itolab/grid.hpp"
#include "itolab/process.hpp"

namespace itolab {

/// Paths [first_path, first_path + path_count) of the Brownian ensemble keyed
/// by `seed`. Path m is generated from its own stream (seed, m), so a batch
/// is an exact slice of any larger ensemble with the same seed and grid.
class BrownianEnsemble {
 public:
  const TimeGrid& grid() const noexcept { return grid_; }
  std::uint64_t seed() const noexcept { return seed_; }
  std::size_t first_path() const noexcept { return first_path_; }
  std::size_t path_count() const noexcept { return values_.paths(); }

  /// W(t_k) for every path in the batch.
  std::span<const double> at_node(std::size_t k) const { return values_.row(k); }
  /// W(t_{k+1}) - W(t_k); the values are prefix sums of exactly these numbers.
  std::span<const double> increment(std::size_t k) const { return increments_.row(k); }

  const PathMatrix& values() const noexcept { return values_; }

 private:
  friend BrownianEnsemble sample_brownian(const TimeGrid&, std::size_t, std::uint64_t, std::size_t);

  TimeGrid grid_;
  std::uint64_t seed_ = 0;
  std::size_t first_path_ = 0;
  PathMatrix increments_;
  PathMatrix values_;
};

BrownianEnsemble sample_brownian(const TimeGrid& grid, std::size_t paths, std::uint64_t seed,
                                 std::size_t first_path = 0);

}  // namespace itolab

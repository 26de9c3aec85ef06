#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "itolab/grid.hpp"

namespace itolab {

/// Dense node-by-path table stored time-major: row k holds every path at t_k,
/// so each row is a contiguous vector over the path axis.
class PathMatrix {
 public:
  PathMatrix() = default;
  PathMatrix(std::size_t rows, std::size_t paths, double fill = 0.0)
      : rows_(rows), paths_(paths), data_(rows * paths, fill) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t paths() const noexcept { return paths_; }

  std::span<double> row(std::size_t k) { return {data_.data() + k * paths_, paths_}; }
  std::span<const double> row(std::size_t k) const { return {data_.data() + k * paths_, paths_}; }

  double& at(std::size_t k, std::size_t m) { return data_[k * paths_ + m]; }
  double at(std::size_t k, std::size_t m) const { return data_[k * paths_ + m]; }

  bool operator==(const PathMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t paths_ = 0;
  std::vector<double> data_;
};

class BrownianEnsemble;

/// A process sampled on (grid nodes x paths). The adapted flag is an assertion
/// by whoever built the sample that node k used only W(t_0..t_k).
struct ProcessSample {
  TimeGrid grid;
  std::size_t first_path = 0;
  PathMatrix values;
  bool adapted = true;

  std::size_t path_count() const noexcept { return values.paths(); }
  double at(std::size_t k, std::size_t m) const { return values.at(k, m); }

  static ProcessSample zeros(const TimeGrid& grid, std::size_t paths, std::size_t first_path = 0);
  static ProcessSample constant(const TimeGrid& grid, std::size_t paths, double value,
                                std::size_t first_path = 0);
  /// f(t) at every node, identical across paths.
  static ProcessSample deterministic(const TimeGrid& grid, std::size_t paths,
                                     const std::function<double(double)>& f,
                                     std::size_t first_path = 0);
  /// f(t_k, W(t_k)) path by path; adapted by construction.
  static ProcessSample markov(const BrownianEnsemble& w,
                              const std::function<double(double, double)>& f);
};

/// Throws ShapeMismatch unless both samples share grid, first path and path count.
void require_same_shape(const ProcessSample& a, const ProcessSample& b);
void require_same_shape(const ProcessSample& a, const BrownianEnsemble& w);

/// a * x + b * y.
ProcessSample linear_combination(double a, const ProcessSample& x, double b, const ProcessSample& y);

}  // namespace itolab

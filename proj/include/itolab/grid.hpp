#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace itolab {

enum class GridKind { Uniform, Geometric };

/// Ordered partition 0 = t_0 < t_1 < ... < t_N = T of a horizon.
///
/// A geometric grid is refined toward T: T - t_k = rho^k * T for k < N, and the
/// final node is T itself, so the terminal gap is whatever the recurrence leaves.
/// Gaps are floored at (N - k) * 4 ulp(T) so long grids stay strictly increasing.
class TimeGrid {
 public:
  const std::vector<double>& nodes() const noexcept { return nodes_; }
  double node(std::size_t k) const { return nodes_[k]; }
  double horizon() const noexcept { return nodes_.back(); }
  GridKind kind() const noexcept { return kind_; }
  std::optional<double> ratio() const noexcept { return ratio_; }

  /// Number of cells N (there are N + 1 nodes).
  std::size_t cells() const noexcept { return nodes_.size() - 1; }
  double step(std::size_t k) const { return nodes_[k + 1] - nodes_[k]; }
  std::vector<double> steps() const;

  /// Largest k with t_k <= t (up to a relative tolerance of 1e-12 of the horizon).
  std::size_t node_at_or_below(double t) const;
  /// Index of a node equal to t within the same tolerance, if any.
  std::optional<std::size_t> find_node(double t) const;

  bool operator==(const TimeGrid& other) const noexcept { return nodes_ == other.nodes_; }

 private:
  friend TimeGrid make_grid(double, std::size_t, GridKind, std::optional<double>);

  std::vector<double> nodes_;
  GridKind kind_ = GridKind::Uniform;
  std::optional<double> ratio_;
};

TimeGrid make_grid(double horizon, std::size_t cells, GridKind kind,
                   std::optional<double> ratio = std::nullopt);

std::string to_string(GridKind kind);
GridKind parse_grid_kind(const std::string& name);

}  // namespace itolab

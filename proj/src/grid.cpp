#include "itolab/grid.hpp"

#include <algorithm>
#include <cmath>

#include "itolab/error.hpp"

namespace itolab {

TimeGrid make_grid(double horizon, std::size_t cells, GridKind kind, std::optional<double> ratio) {
  require(std::isfinite(horizon) && horizon > 0.0, ErrorKind::InvalidArgument,
          "grid horizon must be positive");
  require(cells >= 2, ErrorKind::InvalidArgument, "grid needs at least 2 cells");

  TimeGrid grid;
  grid.kind_ = kind;
  grid.nodes_.resize(cells + 1);
  if (kind == GridKind::Uniform) {
    for (std::size_t k = 0; k < cells; ++k) {
      grid.nodes_[k] = horizon * static_cast<double>(k) / static_cast<double>(cells);
    }
  } else {
    require(ratio.has_value() && *ratio > 0.0 && *ratio < 1.0, ErrorKind::InvalidArgument,
            "geometric grid ratio must lie in (0,1)");
    grid.ratio_ = ratio;
    // Once rho^k T falls below a few ulps of T the nodes would round onto T.
    // The gap is floored at (N - k) * 4 ulp, which keeps every node distinct
    // and exactly representable; there both sides of the recurrence are far
    // below the 1e-12 tolerance.
    const double ulp = horizon - std::nextafter(horizon, 0.0);
    double gap = horizon;
    for (std::size_t k = 0; k < cells; ++k) {
      const double floor_gap = static_cast<double>(cells - k) * 4.0 * ulp;
      grid.nodes_[k] = horizon - std::max(gap, floor_gap);
      gap *= *ratio;
    }
  }
  grid.nodes_[0] = 0.0;
  grid.nodes_[cells] = horizon;
  for (std::size_t k = 0; k < cells; ++k) {
    require(grid.nodes_[k] < grid.nodes_[k + 1], ErrorKind::InvalidArgument,
            "grid nodes collapsed; ratio too small for this cell count");
  }
  return grid;
}

std::vector<double> TimeGrid::steps() const {
  std::vector<double> out(cells());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = step(k);
  return out;
}

std::size_t TimeGrid::node_at_or_below(double t) const {
  const double tol = 1e-12 * horizon();
  const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), t + tol);
  if (it == nodes_.begin()) fail(ErrorKind::InvalidArgument, "time precedes the grid");
  return static_cast<std::size_t>(std::distance(nodes_.begin(), it) - 1);
}

std::optional<std::size_t> TimeGrid::find_node(double t) const {
  if (t < -1e-12 * horizon()) return std::nullopt;
  const std::size_t k = node_at_or_below(t);
  if (std::abs(nodes_[k] - t) <= 1e-12 * horizon()) return k;
  return std::nullopt;
}

std::string to_string(GridKind kind) {
  return kind == GridKind::Uniform ? "uniform" : "geometric";
}

GridKind parse_grid_kind(const std::string& name) {
  if (name == "uniform") return GridKind::Uniform;
  if (name == "geometric") return GridKind::Geometric;
  fail(ErrorKind::InvalidArgument, "unknown grid kind '" + name + "'");
}

}  // namespace itolab

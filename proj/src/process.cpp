#include "itolab/process.hpp"

#include "itolab/brownian.hpp"
#include "itolab/error.hpp"
#include "itolab/simd/kernels.hpp"

namespace itolab {

ProcessSample ProcessSample::zeros(const TimeGrid& grid, std::size_t paths, std::size_t first_path) {
  return constant(grid, paths, 0.0, first_path);
}

ProcessSample ProcessSample::constant(const TimeGrid& grid, std::size_t paths, double value,
                                      std::size_t first_path) {
  return ProcessSample{grid, first_path, PathMatrix(grid.cells() + 1, paths, value), true};
}

ProcessSample ProcessSample::deterministic(const TimeGrid& grid, std::size_t paths,
                                           const std::function<double(double)>& f,
                                           std::size_t first_path) {
  ProcessSample out = zeros(grid, paths, first_path);
  for (std::size_t k = 0; k <= grid.cells(); ++k) {
    const double v = f(grid.node(k));
    for (double& x : out.values.row(k)) x = v;
  }
  return out;
}

ProcessSample ProcessSample::markov(const BrownianEnsemble& w,
                                    const std::function<double(double, double)>& f) {
  ProcessSample out = zeros(w.grid(), w.path_count(), w.first_path());
  for (std::size_t k = 0; k <= w.grid().cells(); ++k) {
    const double t = w.grid().node(k);
    const auto wk = w.at_node(k);
    auto row = out.values.row(k);
    for (std::size_t m = 0; m < row.size(); ++m) row[m] = f(t, wk[m]);
  }
  return out;
}

void require_same_shape(const ProcessSample& a, const ProcessSample& b) {
  require(a.grid == b.grid, ErrorKind::ShapeMismatch, "processes live on different grids");
  require(a.path_count() == b.path_count() && a.first_path == b.first_path,
          ErrorKind::ShapeMismatch, "processes cover different paths");
}

void require_same_shape(const ProcessSample& a, const BrownianEnsemble& w) {
  require(a.grid == w.grid(), ErrorKind::ShapeMismatch, "process and ensemble grids differ");
  require(a.path_count() == w.path_count() && a.first_path == w.first_path(),
          ErrorKind::ShapeMismatch, "process and ensemble cover different paths");
}

ProcessSample linear_combination(double a, const ProcessSample& x, double b,
                                 const ProcessSample& y) {
  require_same_shape(x, y);
  ProcessSample out = x;
  out.adapted = x.adapted && y.adapted;
  for (std::size_t k = 0; k < out.values.rows(); ++k) {
    simd::scale(out.values.row(k), x.values.row(k), a);
    simd::add_scaled(out.values.row(k), y.values.row(k), b);
  }
  return out;
}

}  // namespace itolab

#pragma once

#include <functional>

namespace itolab {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int evaluations = 0;
  bool converged = true;  // false if the depth limit was hit somewhere
};

/// Adaptive Simpson on [a, b] to an absolute tolerance, with Richardson
/// correction on accepted panels.
QuadratureResult adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                                  double abs_tol = 1e-10, int max_depth = 60);

}  // namespace itolab

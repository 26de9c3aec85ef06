#pragma once

#include <cstddef>
#include <vector>

#include "itolab/brownian.hpp"
#include "itolab/process.hpp"

namespace itolab {

/// Running integral I(t_k) on every path; I(t_0) = 0.
using PartialIntegralProcess = ProcessSample;

/// I(t_k) = sum_{j<k} zeta(t_j) (W(t_{j+1}) - W(t_j)).
///
/// Throws ShapeMismatch if zeta and W differ in grid or paths, and
/// AdaptednessViolation if zeta is not flagged adapted.
PartialIntegralProcess ito_integral(const ProcessSample& zeta, const BrownianEnsemble& w);

/// I(t_N) alone, without materialising the running process.
std::vector<double> ito_terminal(const ProcessSample& zeta, const BrownianEnsemble& w);

/// sum_{j<up_to} u(t_j) (t_{j+1} - t_j) per path. up_to > N is InvalidArgument.
std::vector<double> lebesgue_integral(const ProcessSample& u, std::size_t up_to);

}  // namespace itolab

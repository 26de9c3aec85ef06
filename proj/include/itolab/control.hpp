#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "itolab/brownian.hpp"
#include "itolab/clark_ocone.hpp"
#include "itolab/representor.hpp"

namespace itolab {

/// dx = (b x + u) dt + sigma dW on [0, T], x(0) = x0.
struct ScalarSystem {
  double b = 0.0;
  double sigma = 1.0;
  double x0 = 0.0;
  double horizon = 1.0;
};

void validate(const ScalarSystem& sys);

/// u(t) = e^{-b(T-t)} (c + v(t)) steering x(T) to the claim. c spreads the
/// mean correction uniformly over [0, T]; v is the representor of
/// zeta~ = zeta - sigma e^{b(T-t)}, cut to zero from node t_K on.
struct SynthesizedControl {
  ProcessSample u;
  double c = 0.0;
  ProcessSample v;
  ClaimSpec target;
  double target_mean = 0.0;
  std::size_t cut_node = 0;
  double eps_eff = 0.0;
};

/// eps must satisfy the representor schedule rules on W's grid.
SynthesizedControl synthesize_control(const ScalarSystem& sys, const ClaimSpec& target,
                                      const BrownianEnsemble& w, double alpha, double eps,
                                      KernelNode node = KernelNode::IncrementEnd);

/// zeta~ on W's grid.
ProcessSample residual_integrand(const ScalarSystem& sys, const ClaimSpec& target,
                                 const BrownianEnsemble& w);

struct ClosedLoopPaths {
  std::vector<double> terminal;     // x(T)
  std::vector<double> grid_target;  // E xi + sum_j zeta_j dW_j
  std::vector<double> claim;        // xi = f(W(T))
};

/// Exponential-Euler (variation of constants, left endpoint) step
/// x_{k+1} = e^{b dt}(x_k + u_k dt + sigma dW_k) on the synthesis ensemble.
ClosedLoopPaths simulate_closed_loop(const ScalarSystem& sys, const SynthesizedControl& ctrl,
                                     const BrownianEnsemble& w);

struct TerminalError {
  Estimate error;            // E|x(T) - target on the grid|^2
  Estimate reference;        // E|target on the grid|^2
  double relative = 0.0;     // error / reference
  Estimate claim_error;      // E|x(T) - xi|^2, includes the grid's own residual
  double claim_relative = 0.0;
};

struct ControlCurvePoint {
  double eps = 0.0;
  double eps_eff = 0.0;
  std::size_t cut_node = 0;
  TerminalError terminal;
};

std::vector<ControlCurvePoint> control_error_curve(const ScalarSystem& sys, const ClaimSpec& target,
                                                   const TimeGrid& grid, std::size_t paths,
                                                   std::uint64_t seed, double alpha,
                                                   const std::vector<double>& eps_schedule,
                                                   std::size_t batch_paths = 0);

struct NormBlowupRow {
  double eps = 0.0;
  std::size_t cut_node = 0;
  double q = 0.0;
  double norm = 0.0;  // ||u||_{L^q(0,t_K; L^p_Omega)}
};

struct NormBlowupReport {
  double p = 2.0;
  std::vector<double> q_list;
  std::vector<NormBlowupRow> rows;
  std::vector<double> growth_exponents;   // slope of log norm against -log eps, per q
  std::vector<bool> increasing;           // strictly increasing as eps decreases, per q
  std::vector<double> last_step_ratio;    // norm(eps_last) / norm(eps_prev), per q
};

NormBlowupReport norm_blowup_report(const ScalarSystem& sys, const ClaimSpec& target,
                                    const TimeGrid& grid, std::size_t paths, std::uint64_t seed,
                                    double alpha, const std::vector<double>& eps_schedule,
                                    std::vector<double> q_list = {1.0, 1.5, 2.0}, double p = 2.0,
                                    std::size_t batch_paths = 0);

}  // namespace itolab

#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "itolab/brownian.hpp"
#include "itolab/clark_ocone.hpp"
#include "itolab/control.hpp"
#include "itolab/representor.hpp"

namespace itolab {

/// Bond rate r, stock drift b, zero volatility, maturity T. Requires b > r.
struct DegenerateMarket {
  double r = 0.0;
  double b = 1.0;
  double maturity = 1.0;
};

/// Throws InvalidMarket unless b - r > 0 and T > 0.
void validate(const DegenerateMarket& mkt);

/// Solution of dY = [r Y + (b - r) Z] dt, Y(T) = xi, built forward from
/// Y0 = e^{-rT} E xi and Z = e^{rt} v e^{-rT} / (b - r), with v the
/// representor of the claim's integrand cut at t_K. The discounted price
/// D = e^{-rt} Y follows D_{k+1} = D_k + e^{-r t_k} (b - r) Z_k dt_k.
struct Replication {
  double y0 = 0.0;
  ProcessSample z;
  ProcessSample y;
  std::vector<double> claim;        // xi
  std::vector<double> grid_target;  // E xi + sum_j zeta_j dW_j
  std::size_t cut_node = 0;
  double eps_eff = 0.0;
};

Replication replicate_claim(const DegenerateMarket& mkt, const ClaimSpec& claim,
                            const BrownianEnsemble& w, double eps, double alpha = 0.0,
                            KernelNode node = KernelNode::IncrementEnd);

struct ReplicationCurvePoint {
  double eps = 0.0;
  double eps_eff = 0.0;
  std::size_t cut_node = 0;
  TerminalError terminal;  // Y(T) against the target
};

std::vector<ReplicationCurvePoint> replication_error_curve(const DegenerateMarket& mkt,
                                                           const ClaimSpec& claim,
                                                           const TimeGrid& grid, std::size_t paths,
                                                           std::uint64_t seed,
                                                           const std::vector<double>& eps_schedule,
                                                           double alpha = 0.0,
                                                           std::size_t batch_paths = 0);

}  // namespace itolab

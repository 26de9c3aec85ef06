#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "itolab/brownian.hpp"
#include "itolab/clark_ocone.hpp"
#include "itolab/mixed_norms.hpp"
#include "itolab/process.hpp"
#include "itolab/stats.hpp"

namespace itolab {

/// Where the deterministic kernel (h - t)^{alpha-1} is evaluated for the
/// increment W(t_{j+1}) - W(t_j). The weight is deterministic, so either
/// choice keeps u adapted; IncrementEnd makes the left-endpoint Bochner sum
/// of u_0 reproduce the continuous error 2 eps - eps^2 / T without the
/// (eps + dt)^2 inflation the start node carries on geometric grids.
enum class KernelNode { IncrementEnd, IncrementStart };

std::string to_string(KernelNode node);
KernelNode parse_kernel_node(const std::string& name);

/// Produces the integrand zeta on whatever ensemble (or path batch) it is given.
using IntegrandFn = std::function<ProcessSample(const BrownianEnsemble&)>;

IntegrandFn claim_integrand_fn(const ClaimSpec& spec);
IntegrandFn constant_integrand_fn(double c);

inline const std::vector<double> kDefaultEpsFractions{0.2, 0.1, 0.05, 0.02, 0.01};

struct RepresentorFamily {
  double alpha = 0.0;
  IntegrandFn zeta;
  std::vector<double> schedule;  // strictly decreasing truncation lengths eps
  KernelNode node = KernelNode::IncrementEnd;
};

/// Throws InvalidArgument unless alpha is in [0,1), the schedule is strictly
/// decreasing inside (0, T), and the smallest eps exceeds the grid's terminal gap.
void validate_family(const RepresentorFamily& fam, const TimeGrid& grid);

/// u_alpha(t_k) = (1-alpha)(h-t_k)^{-alpha} sum_{j<k} zeta(t_j) K_j dW_j for
/// k < horizon node (h = its time), zero from the horizon node on. K_j is
/// (h - t_{j+1})^{alpha-1} or (h - t_j)^{alpha-1} per the kernel node.
ProcessSample build_u_alpha(const RepresentorFamily& fam, const BrownianEnsemble& w,
                            std::optional<std::size_t> horizon_node = std::nullopt);

struct CurvePoint {
  double eps = 0.0;
  double eps_eff = 0.0;  // T - t_K with t_K the node at or below T - eps
  std::size_t cut_node = 0;
  Estimate error;        // E|int_0^{t_K} u dt - int_0^T zeta dW|^p
};

struct RepresentationCurve {
  double p = 2.0;
  std::vector<CurvePoint> points;
  Estimate reference;    // E|int_0^T zeta dW|^p
  bool decreasing = false;
  double final_fraction = 0.0;
  bool pass = false;
};

inline constexpr double kDefaultFinalFraction = 0.05;

/// Error curve on a single ensemble.
RepresentationCurve verify_representation(const RepresentorFamily& fam, const BrownianEnsemble& w,
                                          double p, double final_fraction = kDefaultFinalFraction);

/// Same, over `paths` paths generated batch by batch.
RepresentationCurve verify_representation(const RepresentorFamily& fam, const TimeGrid& grid,
                                          std::size_t paths, std::uint64_t seed, double p,
                                          double final_fraction = kDefaultFinalFraction,
                                          std::size_t batch_paths = 0);

/// Conditional expectation at the cut: either E xi + sum_{j<K} zeta_j dW_j
/// from a known integrand, or quantile-bin regression of xi on W(t_K).
struct ConditionalOracle {
  double mean = 0.0;
  const ProcessSample* zeta = nullptr;
};

struct DensityApprox {
  ProcessSample u;            // xi(t_K) / delta_eff on cells K..N-1, zero before
  std::size_t cut_node = 0;
  double delta_eff = 0.0;     // T - t_K
  std::vector<double> xi_cut; // E[xi | F_{t_K}]
};

/// delta >= T or delta <= 0 is InvalidArgument.
DensityApprox density_approx(const std::vector<double>& xi, double delta,
                             const BrownianEnsemble& w,
                             std::optional<ConditionalOracle> oracle = std::nullopt,
                             std::size_t bins = 64);

struct DensityPoint {
  double delta = 0.0;
  double delta_eff = 0.0;
  Estimate error;  // E|int u_delta dt - xi|^p
};

std::vector<DensityPoint> density_error_curve(const ClaimSpec& claim,
                                              const std::vector<double>& deltas,
                                              const TimeGrid& grid, std::size_t paths,
                                              std::uint64_t seed, double p, bool use_oracle = true,
                                              std::size_t bins = 64, std::size_t batch_paths = 0);

struct IntegrabilityRow {
  double q = 0.0;
  std::size_t cells = 0;
  double terminal_gap = 0.0;  // T - t_{N-1}
  double omega_outer = 0.0;   // ||u||_{L^p_Omega(L^q_t)}
  double time_outer = 0.0;    // ||u||_{L^q_t(L^p_Omega)}
};

struct IntegrabilityFlag {
  double q = 0.0;
  bool omega_outer_diverging = false;
  bool time_outer_diverging = false;
};

struct IntegrabilityReport {
  double p = 2.0;
  std::vector<IntegrabilityRow> rows;
  std::vector<IntegrabilityFlag> flags;
};

/// Divergence test on a refinement sequence: increments d_i between
/// consecutive values; diverging when the last increment is more than half
/// the first and not negligible (> 1e-6 of the value).
bool refinement_diverges(const std::vector<double>& values);

/// Norms of u_alpha on geometric grids (ratio rho) with the given cell
/// counts. Grids with a common ratio share their leading nodes, so the same
/// seed couples the refinements path by path.
IntegrabilityReport integrability_report(const RepresentorFamily& fam,
                                         const std::vector<double>& q_list, double p,
                                         double horizon, double rho,
                                         const std::vector<std::size_t>& refinements,
                                         std::size_t paths, std::uint64_t seed,
                                         std::size_t batch_paths = 0);

struct ContinuityPoint {
  double s = 0.0;
  double s_prime = 0.0;
  double gap = 0.0;
  double difference = 0.0;  // ||u(.,s) - u(.,s')||_{L^1_t(L^p_Omega)}
};

struct ContinuityReport {
  double p = 2.0;
  std::vector<ContinuityPoint> points;
  LineFit fit;  // log difference against log gap; slope is the empirical exponent
};

/// u(., s) is the family rebuilt with horizon s (a grid node). Pairs are
/// (s node, s' node).
ContinuityReport continuity_modulus(const RepresentorFamily& fam, const TimeGrid& grid,
                                    const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
                                    std::size_t paths, std::uint64_t seed, double p,
                                    std::size_t batch_paths = 0);

}  // namespace itolab

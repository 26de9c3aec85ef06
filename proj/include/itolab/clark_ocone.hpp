#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "itolab/brownian.hpp"
#include "itolab/grid.hpp"
#include "itolab/process.hpp"
#include "itolab/stats.hpp"

namespace itolab {

/// Catalog of terminal claims xi = f(W(h)) with closed-form martingale
/// representation xi = E xi + int_0^h zeta dW. h is the claim horizon, T by
/// default.
enum class ClaimTag { Constant, Linear, Square, Cube, Geometric, Polynomial };

struct ClaimSpec {
  ClaimTag tag = ClaimTag::Linear;
  double value = 0.0;                 // Constant
  double sigma = 1.0;                 // Geometric
  std::vector<double> coefficients;   // Polynomial: sum_i a_i W(h)^i
  double scale = 1.0;                 // multiplies the whole claim

  static ClaimSpec constant(double c) { return {ClaimTag::Constant, c, 1.0, {}, 1.0}; }
  static ClaimSpec linear() { return {ClaimTag::Linear, 0.0, 1.0, {}, 1.0}; }
  static ClaimSpec square() { return {ClaimTag::Square, 0.0, 1.0, {}, 1.0}; }
  static ClaimSpec cube() { return {ClaimTag::Cube, 0.0, 1.0, {}, 1.0}; }
  static ClaimSpec geometric(double sigma) { return {ClaimTag::Geometric, 0.0, sigma, {}, 1.0}; }
  static ClaimSpec polynomial(std::vector<double> a) {
    return {ClaimTag::Polynomial, 0.0, 1.0, std::move(a), 1.0};
  }
};

std::string to_string(ClaimTag tag);
ClaimTag parse_claim_tag(const std::string& name);

/// Parses {"tag": "square"}, {"tag": "geometric", "sigma": 1},
/// {"tag": "constant", "value": 2}, {"tag": "polynomial", "coefficients": [..]},
/// with an optional "scale". Throws InvalidArgument on unknown tags or fields
/// of the wrong type.
ClaimSpec parse_claim(const std::string& json_text);
std::string claim_json(const ClaimSpec& spec);

/// xi given W(h) = w.
double claim_payoff(const ClaimSpec& spec, double w, double h);
/// E[xi | W(t) = w] for a claim on W(h), t <= h.
double claim_conditional_mean(const ClaimSpec& spec, double t, double w, double h);
/// zeta(t, w) = d/dw E[xi | W(t) = w].
double claim_integrand(const ClaimSpec& spec, double t, double w, double h);
/// E xi for horizon h.
double claim_mean(const ClaimSpec& spec, double h);
/// Whether zeta vanishes identically.
bool claim_is_deterministic(const ClaimSpec& spec);

struct ClaimSample {
  std::vector<double> xi;  // f(W(t_h)) per path
  ProcessSample zeta;      // zero at nodes >= horizon node
  double mean = 0.0;
  std::size_t horizon_node = 0;
};

/// Evaluates the claim on W with horizon t_{horizon_node} (default: t_N).
ClaimSample evaluate_claim(const ClaimSpec& spec, const BrownianEnsemble& w,
                           std::optional<std::size_t> horizon_node = std::nullopt);

/// zeta only, as a process on W's grid.
ProcessSample claim_zeta(const ClaimSpec& spec, const BrownianEnsemble& w,
                         std::optional<std::size_t> horizon_node = std::nullopt);

struct ResidualPoint {
  std::size_t cells = 0;
  Estimate residual;  // E|xi - E xi - sum zeta dW|^2
};

/// Representation residual on uniform grids with the given cell counts.
std::vector<ResidualPoint> representation_residual(const ClaimSpec& spec, double horizon,
                                                   const std::vector<std::size_t>& refinements,
                                                   std::size_t paths, std::uint64_t seed,
                                                   std::size_t batch_paths = 0);

}  // namespace itolab

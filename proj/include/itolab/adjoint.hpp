#pragma once

#include <cstddef>
#include <vector>

#include "itolab/brownian.hpp"
#include "itolab/process.hpp"
#include "itolab/stats.hpp"

namespace itolab {

inline constexpr std::size_t kDefaultRegressionBins = 64;

/// Discrete E[eta | F_{t_k}] for k < s_node by piecewise-constant regression
/// of eta on W(t_k) over equal-count quantile bins; for k >= s_node the
/// output is eta itself. Ties are never split across bins, so at t_0 (where
/// W = 0 on every path) there is a single bin and the estimate is the mean.
///
/// eta must be a functional of the path up to s_node. Throws
/// InsufficientSamples when there are fewer than 2 paths per bin.
ProcessSample adjoint_process(const std::vector<double>& eta, const BrownianEnsemble& w,
                              std::size_t s_node, std::size_t bins = kDefaultRegressionBins);

/// Regression of eta on the values x (one per path); the same binning as above.
std::vector<double> bin_regression(const std::vector<double>& eta, std::span<const double> x,
                                   std::size_t bins);

/// k -> E|E[eta|F_{t_k}]|^{p'} for k = 0..s_node, and the checks behind the
/// conditional-moment inequality: the sup over k reaches the terminal
/// moment, equality holds at s_node, and the profile is nondecreasing up to
/// `noise_se` combined standard errors between consecutive nodes.
struct ConditionalMomentProfile {
  std::size_t s_node = 0;
  double p_prime = 2.0;
  std::vector<double> times;
  std::vector<Estimate> moments;  // E|.|^{p'}
  Estimate terminal;              // E|eta|^{p'}
  double sup_norm = 0.0;          // max_k moments^{1/p'}
  double terminal_norm = 0.0;     // terminal^{1/p'}
  bool sup_reaches_terminal = false;
  bool equality_at_s = false;
  bool monotone = false;
  double worst_drop_se = 0.0;     // largest drop between neighbours, in combined SE
};

ConditionalMomentProfile conditional_moment_profile(const std::vector<double>& eta,
                                                    const BrownianEnsemble& w,
                                                    std::size_t s_node, double p_prime,
                                                    std::size_t bins = kDefaultRegressionBins,
                                                    double noise_se = 5.0);

}  // namespace itolab

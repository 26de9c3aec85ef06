#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "itolab/grid.hpp"
#include "itolab/stats.hpp"

namespace itolab {

// The family eta_n = int_0^s e^{n t} dW(t); E[eta_n | F_t] is the partial
// integral up to t. Everything is evaluated in log space so large n never
// overflows intermediate steps.

struct SharpnessConfig {
  double p = 2.0;  // in (1, inf)
  double r = 2.0;  // in (1, inf)
  double s = 1.0;
  std::vector<int> n_list;

  double p_prime() const noexcept { return p / (p - 1.0); }
  double r_prime() const noexcept { return r / (r - 1.0); }
};

/// Throws InvalidArgument unless p, r lie in (1, inf), s > 0, and n_list is
/// a nonempty increasing list of integers >= 1.
void validate(const SharpnessConfig& cfg);

/// c_{p'} = (Gamma((p'+1)/2) / sqrt(pi))^{1/p'}, so that for G ~ N(0, v),
/// (E|G|^{p'})^{1/p'} = c_{p'} sqrt(2 v). p' < 1 is InvalidArgument.
double gaussian_abs_moment(double p_prime);

/// log of c_{p'} sqrt((e^{2ns} - 1)/n).
double log_eta_norm(int n, double s, double p_prime);
double eta_norm(int n, double s, double p_prime);

enum class ConditionalMode { ExactQuadrature, UpperBound };

/// log of (int_0^s [c_{p'} sqrt((e^{2nt}-1)/n)]^{r'} dt)^{1/r'} (exact) or of
/// c_{p'} e^{ns} / (sqrt(n) (n r')^{1/r'}) (bound).
double log_conditional_norm(int n, double s, double p_prime, double r_prime, ConditionalMode mode);
double conditional_norm(int n, double s, double p_prime, double r_prime, ConditionalMode mode);

/// log of e^{ns} / ((n r')^{1/r'} sqrt(e^{2ns} - 1)).
double log_ratio_bound(int n, double s, double r_prime);
double ratio_bound(int n, double s, double r_prime);

/// log(ratio_bound / threshold), arranged so that terms which cancel
/// analytically cancel in floating point too; its sign decides
/// "bound < threshold" even when the two differ far below one ulp.
double ratio_bound_log_margin(int n, double s, double r_prime, double threshold);

struct RatioRow {
  int n = 0;
  double eta_norm = 0.0;
  double conditional_exact = 0.0;
  double conditional_bound = 0.0;
  double ratio = 0.0;
  double ratio_bound = 0.0;
};

struct RatioDecay {
  std::vector<RatioRow> rows;
  bool ratio_within_bound = false;     // ratio <= bound (1 + 1e-9) everywhere
  bool exact_within_bound = false;     // conditional exact <= bound everywhere
  bool bound_decreasing = false;       // strictly, for n > 1
};

RatioDecay ratio_decay(const SharpnessConfig& cfg);

/// Monte Carlo cross-checks on a uniform grid over [0, s].
Estimate gaussian_abs_moment_mc(double p_prime, std::size_t draws, std::uint64_t seed);
Estimate eta_norm_mc(int n, double s, double p_prime, std::size_t cells, std::size_t paths,
                     std::uint64_t seed);
/// Standard error by the delta method over the per-node moments (two passes
/// over the same paths).
Estimate conditional_norm_mc(int n, double s, double p_prime, double r_prime, std::size_t cells,
                             std::size_t paths, std::uint64_t seed);

}  // namespace itolab

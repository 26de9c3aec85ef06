#include "itolab/sharpness.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "itolab/batch.hpp"
#include "itolab/error.hpp"
#include "itolab/integrals.hpp"
#include "itolab/mixed_norms.hpp"
#include "itolab/quadrature.hpp"
#include "itolab/random.hpp"

namespace itolab {

namespace {

// log(e^{2x} - 1) for x > 0.
double log_expm1_twice(double x) { return 2.0 * x + std::log1p(-std::exp(-2.0 * x)); }

void check_n(int n) { require(n >= 1, ErrorKind::InvalidArgument, "n must be >= 1"); }

ProcessSample exponential_integrand(const TimeGrid& grid, const BrownianEnsemble& w, int n) {
  ProcessSample zeta = ProcessSample::deterministic(
      grid, w.path_count(), [n](double t) { return std::exp(n * t); }, w.first_path());
  return zeta;
}

}  // namespace

void validate(const SharpnessConfig& cfg) {
  require(cfg.p > 1.0 && std::isfinite(cfg.p) && cfg.r > 1.0 && std::isfinite(cfg.r),
          ErrorKind::InvalidArgument, "p and r must lie strictly inside (1, inf)");
  require(cfg.s > 0.0, ErrorKind::InvalidArgument, "s must be positive");
  require(!cfg.n_list.empty(), ErrorKind::InvalidArgument, "n list is empty");
  for (std::size_t i = 0; i < cfg.n_list.size(); ++i) {
    check_n(cfg.n_list[i]);
    if (i) require(cfg.n_list[i] > cfg.n_list[i - 1], ErrorKind::InvalidArgument,
                   "n list must be increasing");
  }
}

double gaussian_abs_moment(double p_prime) {
  require(p_prime >= 1.0, ErrorKind::InvalidArgument, "p' must be >= 1");
  const double log_c = (std::lgamma(0.5 * (p_prime + 1.0)) - 0.5 * std::log(std::numbers::pi)) / p_prime;
  return std::exp(log_c);
}

double log_eta_norm(int n, double s, double p_prime) {
  check_n(n);
  return std::log(gaussian_abs_moment(p_prime)) + 0.5 * (log_expm1_twice(n * s) - std::log(n));
}

double eta_norm(int n, double s, double p_prime) { return std::exp(log_eta_norm(n, s, p_prime)); }

double log_conditional_norm(int n, double s, double p_prime, double r_prime, ConditionalMode mode) {
  check_n(n);
  require(r_prime >= 1.0, ErrorKind::InvalidArgument, "r' must be >= 1");
  const double nr = n * r_prime;
  const double log_bound =
      std::log(gaussian_abs_moment(p_prime)) + n * s - 0.5 * std::log(n) - std::log(nr) / r_prime;
  if (mode == ConditionalMode::UpperBound) return log_bound;
  // int_0^s (e^{2nt}-1)^{r'/2} dt = e^{n r' s} / (n r') * G, with
  // G = int_0^s n r' e^{n r'(t-s)} (1 - e^{-2nt})^{r'/2} dt in [0, 1].
  // 1 - G = e^{-n r' s} + int_0^s n r' e^{n r'(t-s)} [1 - (1 - e^{-2nt})^{r'/2}] dt
  // has a nonnegative integrand, so G <= 1 survives rounding.
  const auto h = [n, s, r_prime, nr](double t) {
    const double deficit = -std::expm1(0.5 * r_prime * std::log1p(-std::exp(-2.0 * n * t)));
    return nr * std::exp(nr * (t - s)) * deficit;
  };
  const double tail = std::exp(-nr * s);
  const QuadratureResult q = adaptive_simpson(h, 0.0, s, 1e-10);
  const double one_minus_g = tail + std::max(q.value, 0.0);
  return log_bound + std::log1p(-one_minus_g) / r_prime;
}

double conditional_norm(int n, double s, double p_prime, double r_prime, ConditionalMode mode) {
  return std::exp(log_conditional_norm(n, s, p_prime, r_prime, mode));
}

double log_ratio_bound(int n, double s, double r_prime) {
  check_n(n);
  // e^{ns} / sqrt(e^{2ns} - 1) = (1 - e^{-2ns})^{-1/2}.
  return -std::log(n * r_prime) / r_prime - 0.5 * std::log1p(-std::exp(-2.0 * n * s));
}

double ratio_bound(int n, double s, double r_prime) { return std::exp(log_ratio_bound(n, s, r_prime)); }

double ratio_bound_log_margin(int n, double s, double r_prime, double threshold) {
  check_n(n);
  require(threshold > 0.0, ErrorKind::InvalidArgument, "threshold must be positive");
  // (n r')^{-1/r'} / threshold first: when that factor equals the threshold
  // exactly (n = 50, r' = 2, threshold 0.1) the quotient is exactly 1 and the
  // sign is carried by the (1 - e^{-2ns})^{-1/2} term alone.
  const double nr = n * r_prime;
  const double leading = r_prime == 2.0 ? 1.0 / std::sqrt(nr) : std::pow(nr, -1.0 / r_prime);
  return std::log(leading / threshold) - 0.5 * std::log1p(-std::exp(-2.0 * n * s));
}

RatioDecay ratio_decay(const SharpnessConfig& cfg) {
  validate(cfg);
  const double pc = cfg.p_prime();
  const double rc = cfg.r_prime();
  RatioDecay out;
  out.ratio_within_bound = out.exact_within_bound = out.bound_decreasing = true;
  double prev_log_bound = 0.0;
  for (std::size_t i = 0; i < cfg.n_list.size(); ++i) {
    const int n = cfg.n_list[i];
    const double log_eta = log_eta_norm(n, cfg.s, pc);
    const double log_exact = log_conditional_norm(n, cfg.s, pc, rc, ConditionalMode::ExactQuadrature);
    const double log_upper = log_conditional_norm(n, cfg.s, pc, rc, ConditionalMode::UpperBound);
    const double log_rb = log_ratio_bound(n, cfg.s, rc);
    RatioRow row{n, std::exp(log_eta), std::exp(log_exact), std::exp(log_upper),
                 std::exp(log_exact - log_eta), std::exp(log_rb)};
    if (row.ratio > row.ratio_bound * (1.0 + 1e-9)) out.ratio_within_bound = false;
    if (log_exact > log_upper) out.exact_within_bound = false;
    if (i > 0 && n > 1 && !(log_rb < prev_log_bound)) out.bound_decreasing = false;
    prev_log_bound = log_rb;
    out.rows.push_back(row);
  }
  return out;
}

Estimate gaussian_abs_moment_mc(double p_prime, std::size_t draws, std::uint64_t seed) {
  require(p_prime >= 1.0, ErrorKind::InvalidArgument, "p' must be >= 1");
  const StreamRng rng(seed);
  Moments m;
  const double sd = std::sqrt(0.5);
  for (std::size_t i = 0; i < draws; ++i) {
    m.add(std::pow(std::abs(sd * rng.normal(0, i)), p_prime));
  }
  return m.mean_estimate();
}

Estimate eta_norm_mc(int n, double s, double p_prime, std::size_t cells, std::size_t paths,
                     std::uint64_t seed) {
  check_n(n);
  const TimeGrid grid = make_grid(s, cells, GridKind::Uniform);
  const auto parts = map_path_batches(grid, paths, seed, 0, [&](const BrownianEnsemble& w) {
    const std::vector<double> eta = ito_terminal(exponential_integrand(grid, w, n), w);
    Moments m;
    for (double x : eta) m.add(std::pow(std::abs(x), p_prime));
    return m;
  });
  Moments total;
  for (const Moments& m : parts) total.merge(m);
  const Estimate moment = total.mean_estimate();
  // Delta method for x -> x^{1/p'}.
  const double value = std::pow(moment.value, 1.0 / p_prime);
  return {value, value / (p_prime * moment.value) * moment.se};
}

Estimate conditional_norm_mc(int n, double s, double p_prime, double r_prime, std::size_t cells,
                             std::size_t paths, std::uint64_t seed) {
  check_n(n);
  require(paths >= 2, ErrorKind::InvalidArgument, "need at least two paths");
  const TimeGrid grid = make_grid(s, cells, GridKind::Uniform);
  // S = sum_j dt_j m_j^{r'/p'} with m_j = E|I(t_j)|^{p'}. First pass: m_j.
  const auto pass1 = map_path_batches(grid, paths, seed, 0, [&](const BrownianEnsemble& w) {
    const ProcessSample I = ito_integral(exponential_integrand(grid, w, n), w);
    std::vector<double> sums(cells, 0.0);
    for (std::size_t k = 0; k < cells; ++k) {
      for (double x : I.values.row(k)) sums[k] += std::pow(std::abs(x), p_prime);
    }
    return sums;
  });
  std::vector<double> m(cells, 0.0);
  for (const auto& part : pass1) {
    for (std::size_t k = 0; k < cells; ++k) m[k] += part[k];
  }
  double total = 0.0;
  std::vector<double> weight(cells, 0.0);
  const double ratio = r_prime / p_prime;
  for (std::size_t k = 0; k < cells; ++k) {
    m[k] /= static_cast<double>(paths);
    total += grid.step(k) * std::pow(m[k], ratio);
    weight[k] = m[k] > 0.0 ? grid.step(k) * ratio * std::pow(m[k], ratio - 1.0) : 0.0;
  }
  // Second pass: delta method, the linearised S is the mean of
  // psi = sum_j weight_j |I(t_j)|^{p'} over paths.
  const auto pass2 = map_path_batches(grid, paths, seed, 0, [&](const BrownianEnsemble& w) {
    const ProcessSample I = ito_integral(exponential_integrand(grid, w, n), w);
    std::vector<double> psi(w.path_count(), 0.0);
    for (std::size_t k = 0; k < cells; ++k) {
      const auto row = I.values.row(k);
      for (std::size_t q = 0; q < row.size(); ++q) psi[q] += weight[k] * std::pow(std::abs(row[q]), p_prime);
    }
    Moments mm;
    for (double x : psi) mm.add(x);
    return mm;
  });
  Moments psi;
  for (const auto& part : pass2) psi.merge(part);
  const double se_total = psi.mean_estimate().se;
  const double value = std::pow(total, 1.0 / r_prime);
  return {value, value / (r_prime * total) * se_total};
}

}  // namespace itolab

#include "itolab/adjoint.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "itolab/error.hpp"

namespace itolab {

std::vector<double> bin_regression(const std::vector<double>& eta, std::span<const double> x,
                                   std::size_t bins) {
  const std::size_t n = x.size();
  require(eta.size() == n, ErrorKind::ShapeMismatch, "regression target and regressor differ");
  require(bins >= 1, ErrorKind::InvalidArgument, "regression needs at least one bin");
  if (n < 2 * bins) {
    fail(ErrorKind::InsufficientSamples,
         "regression with " + std::to_string(bins) + " bins needs at least " +
             std::to_string(2 * bins) + " paths, got " + std::to_string(n));
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return x[a] < x[b] || (x[a] == x[b] && a < b);
  });

  std::vector<double> fitted(n);
  std::size_t begin = 0;
  for (std::size_t b = 0; b < bins && begin < n; ++b) {
    std::size_t end = b + 1 == bins ? n : (n * (b + 1)) / bins;
    end = std::max(end, begin + 1);
    // Extend past ties so equal regressor values share a bin.
    while (end < n && x[order[end]] == x[order[end - 1]]) ++end;
    double total = 0.0;
    for (std::size_t i = begin; i < end; ++i) total += eta[order[i]];
    const double mean = total / static_cast<double>(end - begin);
    for (std::size_t i = begin; i < end; ++i) fitted[order[i]] = mean;
    begin = end;
  }
  return fitted;
}

ProcessSample adjoint_process(const std::vector<double>& eta, const BrownianEnsemble& w,
                              std::size_t s_node, std::size_t bins) {
  require(s_node <= w.grid().cells(), ErrorKind::InvalidArgument, "s node beyond the grid");
  require(eta.size() == w.path_count(), ErrorKind::ShapeMismatch,
          "eta must have one value per path");
  if (w.path_count() < 2 * bins) {
    fail(ErrorKind::InsufficientSamples, "too few paths for the requested regression bins");
  }
  ProcessSample out = ProcessSample::zeros(w.grid(), w.path_count(), w.first_path());
  for (std::size_t k = 0; k <= w.grid().cells(); ++k) {
    auto row = out.values.row(k);
    if (k >= s_node) {
      std::copy(eta.begin(), eta.end(), row.begin());
    } else {
      const auto fitted = bin_regression(eta, w.at_node(k), bins);
      std::copy(fitted.begin(), fitted.end(), row.begin());
    }
  }
  return out;
}

ConditionalMomentProfile conditional_moment_profile(const std::vector<double>& eta,
                                                    const BrownianEnsemble& w,
                                                    std::size_t s_node, double p_prime,
                                                    std::size_t bins, double noise_se) {
  require(p_prime >= 1.0, ErrorKind::InvalidArgument, "moment exponent must be >= 1");
  require(s_node <= w.grid().cells(), ErrorKind::InvalidArgument, "s node beyond the grid");
  require(eta.size() == w.path_count(), ErrorKind::ShapeMismatch,
          "eta must have one value per path");

  auto moment = [p_prime](const std::vector<double>& v) {
    Moments m;
    for (double x : v) m.add(std::pow(std::abs(x), p_prime));
    return m.mean_estimate();
  };

  ConditionalMomentProfile prof;
  prof.s_node = s_node;
  prof.p_prime = p_prime;
  prof.terminal = moment(eta);
  prof.terminal_norm = std::pow(prof.terminal.value, 1.0 / p_prime);
  for (std::size_t k = 0; k <= s_node; ++k) {
    prof.times.push_back(w.grid().node(k));
    prof.moments.push_back(k == s_node ? moment(eta) : moment(bin_regression(eta, w.at_node(k), bins)));
  }

  double sup = 0.0;
  for (const Estimate& m : prof.moments) sup = std::max(sup, m.value);
  prof.sup_norm = std::pow(sup, 1.0 / p_prime);
  prof.sup_reaches_terminal = prof.sup_norm >= prof.terminal_norm;
  prof.equality_at_s = prof.moments.back().value == prof.terminal.value;

  prof.monotone = true;
  for (std::size_t k = 0; k + 1 < prof.moments.size(); ++k) {
    const double drop = prof.moments[k].value - prof.moments[k + 1].value;
    if (drop <= 0.0) continue;
    const double se = std::hypot(prof.moments[k].se, prof.moments[k + 1].se);
    const double in_se = se > 0.0 ? drop / se : std::numeric_limits<double>::infinity();
    prof.worst_drop_se = std::max(prof.worst_drop_se, in_se);
    if (in_se > noise_se) prof.monotone = false;
  }
  return prof;
}

}  // namespace itolab

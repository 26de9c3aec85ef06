#include "itolab/stats.hpp"

#include <cassert>

#include "itolab/simd/kernels.hpp"

namespace itolab {

double Estimate::z_score(double target) const noexcept {
  const double diff = std::abs(value - target);
  if (diff == 0.0) return 0.0;
  if (se == 0.0) return std::numeric_limits<double>::infinity();
  return diff / se;
}

void Moments::add(std::span<const double> xs) noexcept {
  count_ += xs.size();
  sum_ += simd::sum(xs);
  sum_sq_ += simd::sum_squares(xs);
}

double Moments::variance() const noexcept {
  if (count_ < 2) return 0.0;
  const double n = static_cast<double>(count_);
  const double v = (sum_sq_ - sum_ * sum_ / n) / (n - 1.0);
  return v > 0.0 ? v : 0.0;
}

Estimate Moments::mean_estimate() const noexcept {
  const double se = count_ ? std::sqrt(variance() / static_cast<double>(count_)) : 0.0;
  return {mean(), se};
}

Estimate mean_estimate(std::span<const double> xs) {
  Moments m;
  m.add(xs);
  return m.mean_estimate();
}

Estimate variance_estimate(std::span<const double> xs) {
  const std::size_t n = xs.size();
  if (n < 2) return {};
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(n);
  double m2 = 0.0, m4 = 0.0;
  for (double x : xs) {
    const double d = (x - mean) * (x - mean);
    m2 += d;
    m4 += d * d;
  }
  const double nn = static_cast<double>(n);
  const double var = m2 / (nn - 1.0);
  const double mu2 = m2 / nn;
  const double mu4 = m4 / nn;
  const double spread = mu4 - mu2 * mu2;
  return {var, spread > 0.0 ? std::sqrt(spread / nn) : 0.0};
}

Estimate covariance_estimate(std::span<const double> x, std::span<const double> y) {
  assert(x.size() == y.size());
  const std::size_t n = x.size();
  if (n < 2) return {};
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  Moments products;
  for (std::size_t i = 0; i < n; ++i) products.add((x[i] - mx) * (y[i] - my));
  const Estimate e = products.mean_estimate();
  const double nn = static_cast<double>(n);
  return {e.value * nn / (nn - 1.0), e.se};
}

Estimate batch_means(std::span<const double> batch_values) {
  Moments m;
  for (double v : batch_values) m.add(v);
  return m.mean_estimate();
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  assert(x.size() == y.size() && x.size() >= 2);
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LineFit fit;
  fit.slope = sxx > 0 ? sxy / sxx : 0.0;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = (sxx > 0 && syy > 0) ? (sxy * sxy) / (sxx * syy) : 1.0;
  return fit;
}

}  // namespace itolab

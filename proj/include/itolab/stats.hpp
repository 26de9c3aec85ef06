#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace itolab {

/// A Monte Carlo estimate with its standard error.
struct Estimate {
  double value = 0.0;
  double se = 0.0;

  /// |value - target| in units of the standard error (0 when both vanish).
  double z_score(double target) const noexcept;
  bool within(double target, double standard_errors) const noexcept {
    return z_score(target) <= standard_errors;
  }
};

/// Running count / sum / sum of squares. Merging in a fixed order keeps the
/// result independent of how paths were batched across threads.
class Moments {
 public:
  void add(double x) noexcept {
    ++count_;
    sum_ += x;
    sum_sq_ += x * x;
  }
  void add(std::span<const double> xs) noexcept;
  void merge(const Moments& other) noexcept {
    count_ += other.count_;
    sum_ += other.sum_;
    sum_sq_ += other.sum_sq_;
  }

  std::size_t count() const noexcept { return count_; }
  double mean() const noexcept { return count_ ? sum_ / static_cast<double>(count_) : 0.0; }
  /// Unbiased sample variance.
  double variance() const noexcept;
  Estimate mean_estimate() const noexcept;

 private:
  std::size_t count_ = 0;
  double sum_ = 0.0;
  double sum_sq_ = 0.0;
};

/// Sample variance of xs with the standard error of that variance,
/// sqrt((m4 - s^4) / n) from the centred fourth moment.
Estimate variance_estimate(std::span<const double> xs);

/// Mean and standard error of xs.
Estimate mean_estimate(std::span<const double> xs);

/// Sample covariance of x and y with standard error of the product mean.
Estimate covariance_estimate(std::span<const double> x, std::span<const double> y);

/// Mean and standard error across independent batch statistics.
Estimate batch_means(std::span<const double> batch_values);

/// Ordinary least squares y = a + b x; returns {b, a, r^2}.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};
LineFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace itolab

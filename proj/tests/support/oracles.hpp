#pragma once

// Closed forms and hand-unrolled discrete sums used as ground truth. Nothing
// here calls into the library beyond reading grid nodes.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

namespace oracle {

// Var of int_0^T e^{a t} dW.
inline double exp_integrand_variance(double a, double T) {
  return a == 0.0 ? T : (std::exp(2.0 * a * T) - 1.0) / (2.0 * a);
}

// E|int_0^{T-eps} u_0 dt - W(T)|^2 for zeta = 1 in continuous time:
// the error is -eps int_0^{T-eps} dW/(T-t) - (W(T) - W(T-eps)), whose
// variance is eps^2 (1/eps - 1/T) + eps.
inline double unit_representation_error(double eps, double T) { return 2.0 * eps - eps * eps / T; }

// Same quantity on a grid with the cut at node K and the kernel at the
// increment's end node, by interchanging the two left-endpoint sums:
// sum_{k<K} dt_k sum_{j<k} dW_j / (T - t_{j+1}) = sum_{j<K} dW_j (t_K - t_{j+1}) / (T - t_{j+1}).
inline double unit_representation_error_discrete(const std::vector<double>& t, std::size_t K) {
  const std::size_t N = t.size() - 1;
  const double T = t[N];
  double total = 0.0;
  for (std::size_t j = 0; j < N; ++j) {
    const double coef = j < K ? (t[K] - t[j + 1]) / (T - t[j + 1]) - 1.0 : -1.0;
    total += coef * coef * (t[j + 1] - t[j]);
  }
  return total;
}

// E|W(T)^2 - T - sum 2 W(t_j) dW_j|^2 = E|sum (dW_j^2 - dt_j)|^2 = 2 sum dt_j^2.
inline double square_residual(const std::vector<double>& t) {
  double total = 0.0;
  for (std::size_t j = 0; j + 1 < t.size(); ++j) total += 2.0 * (t[j + 1] - t[j]) * (t[j + 1] - t[j]);
  return total;
}

// (E|G|^{p})^{1/p} for G ~ N(0, 1/2).
inline double c_p(double p) { return std::pow(std::tgamma(0.5 * (p + 1.0)) / std::sqrt(std::numbers::pi), 1.0 / p); }

inline double eta_norm(int n, double s, double p) { return c_p(p) * std::sqrt((std::exp(2.0 * n * s) - 1.0) / n); }

// r' = 2: int_0^s c^2 (e^{2nt} - 1)/n dt = c^2 ((e^{2ns} - 1)/(2n) - s)/n.
inline double conditional_norm_r2(int n, double s, double p) {
  const double c = c_p(p);
  return std::sqrt(c * c * ((std::exp(2.0 * n * s) - 1.0) / (2.0 * n) - s) / n);
}

inline double conditional_bound(int n, double s, double p, double r) {
  return c_p(p) * std::exp(n * s) / (std::sqrt(static_cast<double>(n)) * std::pow(n * r, 1.0 / r));
}

inline double ratio_bound(int n, double s, double r) {
  return std::exp(n * s) / (std::pow(n * r, 1.0 / r) * std::sqrt(std::exp(2.0 * n * s) - 1.0));
}

}  // namespace oracle

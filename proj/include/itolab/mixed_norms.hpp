#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "itolab/process.hpp"

namespace itolab {

/// A Lebesgue exponent in [1, infinity]; infinity is a distinct state rather
/// than a large number.
class Exponent {
 public:
  constexpr Exponent() = default;
  /// Throws InvalidArgument unless value >= 1 (an infinite double gives infinity()).
  Exponent(double value);  // NOLINT: implicit from double is intended
  static constexpr Exponent infinity() noexcept { return Exponent(Tag{}); }

  bool is_infinite() const noexcept { return infinite_; }
  double value() const noexcept {
    return infinite_ ? std::numeric_limits<double>::infinity() : value_;
  }
  /// p' with 1/p + 1/p' = 1.
  Exponent conjugate() const noexcept;

  bool operator==(const Exponent&) const = default;

 private:
  struct Tag {};
  constexpr explicit Exponent(Tag) : value_(0.0), infinite_(true) {}

  double value_ = 1.0;
  bool infinite_ = false;
};

std::string to_string(const Exponent& e);

/// OmegaOuter: L^p_Omega(L^q_t).  TimeOuter: L^q_t(L^p_Omega).
enum class NormOrder { OmegaOuter, TimeOuter };

std::string to_string(NormOrder order);
NormOrder parse_norm_order(const std::string& name);

struct MixedNormSpec {
  Exponent p;  // probability exponent
  Exponent q;  // time exponent
  NormOrder order = NormOrder::OmegaOuter;

  MixedNormSpec dual() const noexcept { return {p.conjugate(), q.conjugate(), order}; }
};

/// Accumulates a mixed norm over path batches on one grid. Each path has
/// weight 1/M (M = total paths added), each cell j weight t_{j+1} - t_j; the
/// value at t_j stands for the whole cell, so node N never contributes.
class MixedNormAccumulator {
 public:
  /// Restricts the time integral to the first `cells` cells when given.
  MixedNormAccumulator(const TimeGrid& grid, MixedNormSpec spec,
                       std::optional<std::size_t> cells = std::nullopt);

  void add(const ProcessSample& f);
  void merge(const MixedNormAccumulator& other);

  std::size_t sample_count() const noexcept { return paths_; }
  double value() const;

 private:
  TimeGrid grid_;
  MixedNormSpec spec_;
  std::size_t cells_;
  std::size_t paths_ = 0;
  // OmegaOuter: running sum (or max) over paths of the inner time norm^p.
  double omega_acc_ = 0.0;
  // TimeOuter: per cell, sum (or max) over paths of |f|^p.
  std::vector<double> time_acc_;
};

double mixed_norm(const ProcessSample& f, const MixedNormSpec& spec,
                  std::optional<std::size_t> cells = std::nullopt);

/// Mean over paths of sum_j f g dt_j (cells 0..N-1).
double pairing(const ProcessSample& f, const ProcessSample& g);

/// The Hoelder-extremal f for g in L^{p'}_Omega(L^{q'}_t), normalised so that
/// ||f||_{p,q} = 1 and pairing(f, g) = ||g||_{p',q'}. p, q finite and > 1;
/// sign(0) = 0. Throws DegenerateInput when g vanishes.
ProcessSample extremal_dual_witness(const ProcessSample& g, double p, double q);

/// Witness run at exponents approaching 1, for the cases p = 1 and/or q = 1.
struct DualTrendPoint {
  double p = 0.0;
  double q = 0.0;
  double pairing = 0.0;
  double dual_norm = 0.0;     // ||g||_{p',q'} at these exponents
  double witness_norm = 0.0;  // ||f||_{p,q}, 1 up to rounding
};

struct DualTrend {
  std::vector<DualTrendPoint> points;
  double limit_dual_norm = 0.0;  // ||g|| at the limiting conjugate exponents
};

/// p_one / q_one select which exponent is sent to 1; the other is held at
/// p_fixed / q_fixed. Approach values default to {1.5, 1.25, 1.1, 1.05}.
DualTrend limiting_dual_trend(const ProcessSample& g, bool p_one, bool q_one, double p_fixed,
                              double q_fixed, std::vector<double> approach = {});

/// {"spec": {...}, "value": v, "sampleCount": M} as a JSON string.
std::string norm_report_json(const MixedNormSpec& spec, double value, std::size_t sample_count);

}  // namespace itolab

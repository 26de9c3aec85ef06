#include "itolab/mixed_norms.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "itolab/error.hpp"
#include "itolab/simd/kernels.hpp"

namespace itolab {

namespace {

double abs_pow(double x, double e) {
  const double a = std::abs(x);
  if (e == 1.0) return a;
  if (e == 2.0) return a * a;
  return std::pow(a, e);
}

double root(double x, double e) {
  if (e == 1.0) return x;
  if (e == 2.0) return std::sqrt(x);
  return std::pow(x, 1.0 / e);
}

double sign(double x) { return x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0); }

}  // namespace

Exponent::Exponent(double value) {
  if (std::isinf(value) && value > 0) {
    *this = infinity();
    return;
  }
  require(value >= 1.0, ErrorKind::InvalidArgument, "exponent must lie in [1, inf]");
  value_ = value;
}

Exponent Exponent::conjugate() const noexcept {
  if (infinite_) return Exponent(1.0);
  if (value_ == 1.0) return infinity();
  return Exponent(value_ / (value_ - 1.0));
}

std::string to_string(const Exponent& e) {
  if (e.is_infinite()) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", e.value());
  return buf;
}

std::string to_string(NormOrder order) {
  return order == NormOrder::OmegaOuter ? "omega-outer" : "time-outer";
}

NormOrder parse_norm_order(const std::string& name) {
  if (name == "omega-outer") return NormOrder::OmegaOuter;
  if (name == "time-outer") return NormOrder::TimeOuter;
  fail(ErrorKind::InvalidArgument, "unknown norm order '" + name + "'");
}

MixedNormAccumulator::MixedNormAccumulator(const TimeGrid& grid, MixedNormSpec spec,
                                           std::optional<std::size_t> cells)
    : grid_(grid), spec_(spec), cells_(cells.value_or(grid.cells())) {
  require(cells_ >= 1 && cells_ <= grid.cells(), ErrorKind::InvalidArgument,
          "norm cell range outside the grid");
  if (spec_.order == NormOrder::TimeOuter) time_acc_.assign(cells_, 0.0);
}

void MixedNormAccumulator::add(const ProcessSample& f) {
  require(f.grid == grid_, ErrorKind::ShapeMismatch, "process grid differs from norm grid");
  require(f.path_count() > 0, ErrorKind::InvalidArgument, "empty process");
  const double p = spec_.p.value();
  const double q = spec_.q.value();
  const std::size_t paths = f.path_count();

  if (spec_.order == NormOrder::OmegaOuter) {
    for (std::size_t m = 0; m < paths; ++m) {
      double inner = 0.0;
      for (std::size_t j = 0; j < cells_; ++j) {
        const double v = f.at(j, m);
        if (spec_.q.is_infinite()) inner = std::max(inner, std::abs(v));
        else inner += abs_pow(v, q) * grid_.step(j);
      }
      if (spec_.p.is_infinite()) {
        omega_acc_ = std::max(omega_acc_, spec_.q.is_infinite() ? inner : root(inner, q));
      } else if (spec_.q.is_infinite()) {
        omega_acc_ += abs_pow(inner, p);
      } else {
        omega_acc_ += p == q ? inner : std::pow(inner, p / q);
      }
    }
  } else {
    for (std::size_t j = 0; j < cells_; ++j) {
      const auto row = f.values.row(j);
      double acc = time_acc_[j];
      for (double v : row) {
        if (spec_.p.is_infinite()) acc = std::max(acc, std::abs(v));
        else acc += abs_pow(v, p);
      }
      time_acc_[j] = acc;
    }
  }
  paths_ += paths;
}

void MixedNormAccumulator::merge(const MixedNormAccumulator& other) {
  require(other.grid_ == grid_ && other.cells_ == cells_ && other.spec_.p == spec_.p &&
              other.spec_.q == spec_.q && other.spec_.order == spec_.order,
          ErrorKind::ShapeMismatch, "merging norm accumulators of different shape");
  if (spec_.order == NormOrder::OmegaOuter) {
    omega_acc_ = spec_.p.is_infinite() ? std::max(omega_acc_, other.omega_acc_)
                                       : omega_acc_ + other.omega_acc_;
  } else {
    for (std::size_t j = 0; j < cells_; ++j) {
      time_acc_[j] = spec_.p.is_infinite() ? std::max(time_acc_[j], other.time_acc_[j])
                                           : time_acc_[j] + other.time_acc_[j];
    }
  }
  paths_ += other.paths_;
}

double MixedNormAccumulator::value() const {
  if (paths_ == 0) return 0.0;
  const double p = spec_.p.value();
  const double q = spec_.q.value();
  const double mass = static_cast<double>(paths_);

  if (spec_.order == NormOrder::OmegaOuter) {
    if (spec_.p.is_infinite()) return omega_acc_;
    return root(omega_acc_ / mass, p);
  }
  double outer = 0.0;
  for (std::size_t j = 0; j < cells_; ++j) {
    // Per-cell L^p_Omega norm.
    const double inner = spec_.p.is_infinite() ? time_acc_[j] : root(time_acc_[j] / mass, p);
    if (spec_.q.is_infinite()) outer = std::max(outer, inner);
    else outer += abs_pow(inner, q) * grid_.step(j);
  }
  return spec_.q.is_infinite() ? outer : root(outer, q);
}

double mixed_norm(const ProcessSample& f, const MixedNormSpec& spec,
                  std::optional<std::size_t> cells) {
  MixedNormAccumulator acc(f.grid, spec, cells);
  acc.add(f);
  return acc.value();
}

double pairing(const ProcessSample& f, const ProcessSample& g) {
  require_same_shape(f, g);
  double total = 0.0;
  for (std::size_t j = 0; j < f.grid.cells(); ++j) {
    total += simd::dot(f.values.row(j), g.values.row(j)) * f.grid.step(j);
  }
  return total / static_cast<double>(f.path_count());
}

ProcessSample extremal_dual_witness(const ProcessSample& g, double p, double q) {
  require(std::isfinite(p) && std::isfinite(q) && p > 1.0 && q > 1.0,
          ErrorKind::InvalidArgument, "witness exponents must be finite and > 1");
  const double pc = p / (p - 1.0);
  const double qc = q / (q - 1.0);
  const std::size_t paths = g.path_count();
  const std::size_t cells = g.grid.cells();

  // S_m = sum_j |g|^{q'} dt_j, the inner L^{q'} mass of path m.
  std::vector<double> s(paths, 0.0);
  for (std::size_t j = 0; j < cells; ++j) {
    const double dt = g.grid.step(j);
    const auto row = g.values.row(j);
    for (std::size_t m = 0; m < paths; ++m) s[m] += abs_pow(row[m], qc) * dt;
  }
  double mean_mass = 0.0;
  for (double sm : s) mean_mass += sm > 0.0 ? std::pow(sm, pc / qc) : 0.0;
  mean_mass /= static_cast<double>(paths);
  require(mean_mass > 0.0, ErrorKind::DegenerateInput, "witness requested for a zero process");

  const double a = std::pow(mean_mass, 1.0 / pc - 1.0);
  ProcessSample f = ProcessSample::zeros(g.grid, paths, g.first_path);
  f.adapted = g.adapted;
  for (std::size_t m = 0; m < paths; ++m) {
    if (s[m] == 0.0) continue;
    const double path_factor = a * std::pow(s[m], pc / qc - 1.0);
    for (std::size_t j = 0; j < cells; ++j) {
      const double v = g.at(j, m);
      f.values.at(j, m) = path_factor * abs_pow(v, qc - 1.0) * sign(v);
    }
  }
  return f;
}

DualTrend limiting_dual_trend(const ProcessSample& g, bool p_one, bool q_one, double p_fixed,
                              double q_fixed, std::vector<double> approach) {
  require(p_one || q_one, ErrorKind::InvalidArgument, "trend needs p or q sent to 1");
  if (approach.empty()) approach = {1.5, 1.25, 1.1, 1.05};
  DualTrend trend;
  for (double e : approach) {
    DualTrendPoint pt;
    pt.p = p_one ? e : p_fixed;
    pt.q = q_one ? e : q_fixed;
    const MixedNormSpec spec{pt.p, pt.q, NormOrder::OmegaOuter};
    const ProcessSample f = extremal_dual_witness(g, pt.p, pt.q);
    pt.pairing = pairing(f, g);
    pt.dual_norm = mixed_norm(g, spec.dual());
    pt.witness_norm = mixed_norm(f, spec);
    trend.points.push_back(pt);
  }
  const MixedNormSpec limit{p_one ? Exponent(1.0) : Exponent(p_fixed),
                            q_one ? Exponent(1.0) : Exponent(q_fixed), NormOrder::OmegaOuter};
  trend.limit_dual_norm = mixed_norm(g, limit.dual());
  return trend;
}

std::string norm_report_json(const MixedNormSpec& spec, double value, std::size_t sample_count) {
  auto exponent = [](const Exponent& e) -> nlohmann::json {
    if (e.is_infinite()) return "inf";
    return e.value();
  };
  nlohmann::ordered_json j;
  j["spec"] = {{"p", exponent(spec.p)}, {"q", exponent(spec.q)}, {"order", to_string(spec.order)}};
  j["value"] = value;
  j["sampleCount"] = sample_count;
  return j.dump();
}

}  // namespace itolab

#include "itolab/representor.hpp"

#include <algorithm>
#include <cmath>

#include "itolab/adjoint.hpp"
#include "itolab/batch.hpp"
#include "itolab/error.hpp"
#include "itolab/integrals.hpp"
#include "itolab/simd/kernels.hpp"

namespace itolab {

namespace {

double abs_pow(double x, double p) {
  const double a = std::abs(x);
  return p == 2.0 ? a * a : (p == 1.0 ? a : std::pow(a, p));
}

// Deterministic factors of u_alpha for horizon node h.
struct KernelWeights {
  std::vector<double> inner;  // K_j multiplying zeta_j dW_j
  std::vector<double> outer;  // (1-alpha)(h - t_k)^{-alpha}
};

KernelWeights kernel_weights(const TimeGrid& grid, double alpha, std::size_t h_node, KernelNode node) {
  const double h = grid.node(h_node);
  KernelWeights kw;
  kw.outer.resize(h_node);
  kw.inner.resize(h_node > 0 ? h_node - 1 : 0);
  for (std::size_t k = 0; k < h_node; ++k) {
    kw.outer[k] = alpha == 0.0 ? 1.0 : (1.0 - alpha) * std::pow(h - grid.node(k), -alpha);
  }
  for (std::size_t j = 0; j + 1 < h_node; ++j) {
    const double gap = h - grid.node(node == KernelNode::IncrementEnd ? j + 1 : j);
    kw.inner[j] = alpha == 0.0 ? 1.0 / gap : std::pow(gap, alpha - 1.0);
  }
  return kw;
}

// Emits u(t_k) for k = 0..rows-1 (rows <= h_node) without storing the process.
template <class OnRow>
void sweep_representor(const ProcessSample& zeta, const BrownianEnsemble& w, const KernelWeights& kw,
                       std::size_t rows, OnRow&& on_row) {
  const std::size_t paths = w.path_count();
  std::vector<double> running(paths, 0.0), product(paths), u(paths);
  for (std::size_t k = 0; k < rows; ++k) {
    simd::scale(u, running, kw.outer[k]);
    on_row(k, std::span<const double>(u));
    if (k < kw.inner.size()) {
      simd::multiply(product, zeta.values.row(k), w.increment(k));
      simd::add_scaled(running, product, kw.inner[k]);
    }
  }
}

void check_alpha(double alpha) {
  require(alpha >= 0.0 && alpha < 1.0, ErrorKind::InvalidArgument, "alpha must lie in [0, 1)");
}

ProcessSample integrand_for(const RepresentorFamily& fam, const BrownianEnsemble& w) {
  require(static_cast<bool>(fam.zeta), ErrorKind::InvalidArgument, "family has no integrand");
  ProcessSample zeta = fam.zeta(w);
  require_same_shape(zeta, w);
  require(zeta.adapted, ErrorKind::AdaptednessViolation, "representor integrand is not adapted");
  return zeta;
}

struct VerifyPartial {
  std::vector<Moments> errors;
  Moments reference;
};

VerifyPartial verify_batch(const RepresentorFamily& fam, const BrownianEnsemble& w,
                           const std::vector<std::size_t>& cuts, double p) {
  const TimeGrid& grid = w.grid();
  const ProcessSample zeta = integrand_for(fam, w);
  const std::vector<double> ito = ito_terminal(zeta, w);
  const KernelWeights kw = kernel_weights(grid, fam.alpha, grid.cells(), fam.node);

  VerifyPartial part;
  part.errors.resize(cuts.size());
  for (double v : ito) part.reference.add(abs_pow(v, p));

  std::vector<double> bochner(w.path_count(), 0.0);
  std::size_t next_cut = 0;
  auto snapshot = [&](std::size_t k) {
    while (next_cut < cuts.size() && cuts[next_cut] == k) {
      Moments& m = part.errors[next_cut];
      for (std::size_t i = 0; i < ito.size(); ++i) m.add(abs_pow(bochner[i] - ito[i], p));
      ++next_cut;
    }
  };
  snapshot(0);
  sweep_representor(zeta, w, kw, cuts.back(), [&](std::size_t k, std::span<const double> u) {
    simd::add_scaled(bochner, u, grid.step(k));
    snapshot(k + 1);
  });
  return part;
}

RepresentationCurve assemble_curve(const RepresentorFamily& fam, const TimeGrid& grid,
                                   const std::vector<std::size_t>& cuts, double p,
                                   double final_fraction, const std::vector<VerifyPartial>& parts) {
  RepresentationCurve curve;
  curve.p = p;
  std::vector<Moments> errors(cuts.size());
  Moments reference;
  for (const VerifyPartial& part : parts) {
    for (std::size_t i = 0; i < cuts.size(); ++i) errors[i].merge(part.errors[i]);
    reference.merge(part.reference);
  }
  curve.reference = reference.mean_estimate();
  for (std::size_t i = 0; i < cuts.size(); ++i) {
    curve.points.push_back({fam.schedule[i], grid.horizon() - grid.node(cuts[i]), cuts[i],
                            errors[i].mean_estimate()});
  }
  curve.decreasing = true;
  for (std::size_t i = 0; i + 1 < curve.points.size(); ++i) {
    const Estimate& a = curve.points[i].error;
    const Estimate& b = curve.points[i + 1].error;
    if (b.value > a.value + std::hypot(a.se, b.se)) curve.decreasing = false;
  }
  const double last = curve.points.back().error.value;
  curve.final_fraction = curve.reference.value > 0.0 ? last / curve.reference.value : 0.0;
  curve.pass = curve.decreasing && last <= final_fraction * curve.reference.value;
  return curve;
}

std::vector<std::size_t> cut_nodes(const RepresentorFamily& fam, const TimeGrid& grid) {
  validate_family(fam, grid);
  std::vector<std::size_t> cuts;
  for (double eps : fam.schedule) cuts.push_back(grid.node_at_or_below(grid.horizon() - eps));
  return cuts;
}

}  // namespace

std::string to_string(KernelNode node) {
  return node == KernelNode::IncrementEnd ? "increment-end" : "increment-start";
}

KernelNode parse_kernel_node(const std::string& name) {
  if (name == "increment-end") return KernelNode::IncrementEnd;
  if (name == "increment-start") return KernelNode::IncrementStart;
  fail(ErrorKind::InvalidArgument, "unknown kernel node '" + name + "'");
}

IntegrandFn claim_integrand_fn(const ClaimSpec& spec) {
  return [spec](const BrownianEnsemble& w) { return claim_zeta(spec, w); };
}

IntegrandFn constant_integrand_fn(double c) {
  return [c](const BrownianEnsemble& w) {
    return ProcessSample::constant(w.grid(), w.path_count(), c, w.first_path());
  };
}

void validate_family(const RepresentorFamily& fam, const TimeGrid& grid) {
  check_alpha(fam.alpha);
  require(!fam.schedule.empty(), ErrorKind::InvalidArgument, "truncation schedule is empty");
  const double horizon = grid.horizon();
  const double terminal_gap = horizon - grid.node(grid.cells() - 1);
  for (std::size_t i = 0; i < fam.schedule.size(); ++i) {
    const double eps = fam.schedule[i];
    require(eps > 0.0 && eps < horizon, ErrorKind::InvalidArgument,
            "every eps must lie strictly inside (0, T)");
    if (i) require(eps < fam.schedule[i - 1], ErrorKind::InvalidArgument,
                   "truncation schedule must be strictly decreasing");
  }
  require(fam.schedule.back() > terminal_gap, ErrorKind::InvalidArgument,
          "smallest eps must exceed the grid's terminal gap");
}

ProcessSample build_u_alpha(const RepresentorFamily& fam, const BrownianEnsemble& w,
                            std::optional<std::size_t> horizon_node) {
  check_alpha(fam.alpha);
  const TimeGrid& grid = w.grid();
  const std::size_t h = horizon_node.value_or(grid.cells());
  require(h >= 1 && h <= grid.cells(), ErrorKind::InvalidArgument, "horizon node outside the grid");
  const ProcessSample zeta = integrand_for(fam, w);
  ProcessSample u = ProcessSample::zeros(grid, w.path_count(), w.first_path());
  sweep_representor(zeta, w, kernel_weights(grid, fam.alpha, h, fam.node), h,
                    [&](std::size_t k, std::span<const double> row) {
                      std::copy(row.begin(), row.end(), u.values.row(k).begin());
                    });
  return u;
}

RepresentationCurve verify_representation(const RepresentorFamily& fam, const BrownianEnsemble& w,
                                          double p, double final_fraction) {
  require(p >= 1.0, ErrorKind::InvalidArgument, "p must be >= 1");
  const std::vector<std::size_t> cuts = cut_nodes(fam, w.grid());
  return assemble_curve(fam, w.grid(), cuts, p, final_fraction, {verify_batch(fam, w, cuts, p)});
}

RepresentationCurve verify_representation(const RepresentorFamily& fam, const TimeGrid& grid,
                                          std::size_t paths, std::uint64_t seed, double p,
                                          double final_fraction, std::size_t batch_paths) {
  require(p >= 1.0, ErrorKind::InvalidArgument, "p must be >= 1");
  const std::vector<std::size_t> cuts = cut_nodes(fam, grid);
  const auto parts = map_path_batches(grid, paths, seed, batch_paths, [&](const BrownianEnsemble& w) {
    return verify_batch(fam, w, cuts, p);
  });
  return assemble_curve(fam, grid, cuts, p, final_fraction, parts);
}

DensityApprox density_approx(const std::vector<double>& xi, double delta, const BrownianEnsemble& w,
                             std::optional<ConditionalOracle> oracle, std::size_t bins) {
  const TimeGrid& grid = w.grid();
  require(delta > 0.0 && delta < grid.horizon(), ErrorKind::InvalidArgument,
          "delta must lie strictly inside (0, T)");
  require(xi.size() == w.path_count(), ErrorKind::ShapeMismatch, "xi must have one value per path");

  DensityApprox d;
  d.cut_node = grid.node_at_or_below(grid.horizon() - delta);
  d.delta_eff = grid.horizon() - grid.node(d.cut_node);

  if (oracle) {
    require(oracle->zeta != nullptr, ErrorKind::InvalidArgument, "oracle without an integrand");
    require_same_shape(*oracle->zeta, w);
    d.xi_cut.assign(w.path_count(), oracle->mean);
    for (std::size_t j = 0; j < d.cut_node; ++j) {
      simd::add_product(d.xi_cut, oracle->zeta->values.row(j), w.increment(j));
    }
  } else if (d.cut_node == 0) {
    double mean = 0.0;
    for (double x : xi) mean += x;
    d.xi_cut.assign(xi.size(), mean / static_cast<double>(xi.size()));
  } else {
    d.xi_cut = bin_regression(xi, w.at_node(d.cut_node), bins);
  }

  d.u = ProcessSample::zeros(grid, w.path_count(), w.first_path());
  for (std::size_t j = d.cut_node; j < grid.cells(); ++j) {
    simd::scale(d.u.values.row(j), d.xi_cut, 1.0 / d.delta_eff);
  }
  return d;
}

std::vector<DensityPoint> density_error_curve(const ClaimSpec& claim, const std::vector<double>& deltas,
                                              const TimeGrid& grid, std::size_t paths,
                                              std::uint64_t seed, double p, bool use_oracle,
                                              std::size_t bins, std::size_t batch_paths) {
  require(!deltas.empty(), ErrorKind::InvalidArgument, "no deltas requested");
  const auto parts = map_path_batches(grid, paths, seed, batch_paths, [&](const BrownianEnsemble& w) {
    const ClaimSample c = evaluate_claim(claim, w);
    std::vector<Moments> out(deltas.size());
    for (std::size_t i = 0; i < deltas.size(); ++i) {
      const auto oracle = use_oracle ? std::optional<ConditionalOracle>({c.mean, &c.zeta})
                                     : std::optional<ConditionalOracle>();
      const DensityApprox d = density_approx(c.xi, deltas[i], w, oracle, bins);
      const std::vector<double> integral = lebesgue_integral(d.u, grid.cells());
      for (std::size_t m = 0; m < integral.size(); ++m) out[i].add(abs_pow(integral[m] - c.xi[m], p));
    }
    return out;
  });
  std::vector<DensityPoint> curve;
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    Moments total;
    for (const auto& part : parts) total.merge(part[i]);
    const std::size_t cut = grid.node_at_or_below(grid.horizon() - deltas[i]);
    curve.push_back({deltas[i], grid.horizon() - grid.node(cut), total.mean_estimate()});
  }
  return curve;
}

bool refinement_diverges(const std::vector<double>& values) {
  if (values.size() < 3) return false;
  const double first = values[1] - values[0];
  const double last = values.back() - values[values.size() - 2];
  return last > 0.5 * first && last > 1e-6 * std::abs(values.back());
}

IntegrabilityReport integrability_report(const RepresentorFamily& fam, const std::vector<double>& q_list,
                                         double p, double horizon, double rho,
                                         const std::vector<std::size_t>& refinements,
                                         std::size_t paths, std::uint64_t seed,
                                         std::size_t batch_paths) {
  check_alpha(fam.alpha);
  require(!q_list.empty() && !refinements.empty(), ErrorKind::InvalidArgument,
          "integrability needs q values and refinements");
  IntegrabilityReport report;
  report.p = p;
  std::vector<std::vector<double>> omega(q_list.size()), time(q_list.size());
  for (std::size_t cells : refinements) {
    const TimeGrid grid = make_grid(horizon, cells, GridKind::Geometric, rho);
    auto fresh = [&] {
      std::vector<MixedNormAccumulator> acc;
      for (double q : q_list) {
        acc.emplace_back(grid, MixedNormSpec{p, q, NormOrder::OmegaOuter});
        acc.emplace_back(grid, MixedNormSpec{p, q, NormOrder::TimeOuter});
      }
      return acc;
    };
    const auto parts = map_path_batches(grid, paths, seed, batch_paths, [&](const BrownianEnsemble& w) {
      const ProcessSample u = build_u_alpha(fam, w);
      auto acc = fresh();
      for (auto& a : acc) a.add(u);
      return acc;
    });
    auto total = fresh();
    for (const auto& part : parts) {
      for (std::size_t i = 0; i < total.size(); ++i) total[i].merge(part[i]);
    }
    for (std::size_t i = 0; i < q_list.size(); ++i) {
      IntegrabilityRow row{q_list[i], cells, horizon - grid.node(cells - 1),
                           total[2 * i].value(), total[2 * i + 1].value()};
      omega[i].push_back(row.omega_outer);
      time[i].push_back(row.time_outer);
      report.rows.push_back(row);
    }
  }
  for (std::size_t i = 0; i < q_list.size(); ++i) {
    report.flags.push_back({q_list[i], refinement_diverges(omega[i]), refinement_diverges(time[i])});
  }
  return report;
}

ContinuityReport continuity_modulus(const RepresentorFamily& fam, const TimeGrid& grid,
                                    const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
                                    std::size_t paths, std::uint64_t seed, double p,
                                    std::size_t batch_paths) {
  check_alpha(fam.alpha);
  require(!pairs.empty(), ErrorKind::InvalidArgument, "no horizon pairs requested");
  for (const auto& [s, sp] : pairs) {
    require(s >= 1 && sp >= 1 && s <= grid.cells() && sp <= grid.cells(), ErrorKind::InvalidArgument,
            "continuity horizons must be grid nodes after t_0");
  }
  auto fresh = [&] {
    std::vector<MixedNormAccumulator> acc;
    for (const auto& [s, sp] : pairs) {
      acc.emplace_back(grid, MixedNormSpec{p, 1.0, NormOrder::TimeOuter}, std::max(s, sp));
    }
    return acc;
  };
  const auto parts = map_path_batches(grid, paths, seed, batch_paths, [&](const BrownianEnsemble& w) {
    auto acc = fresh();
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      const ProcessSample a = build_u_alpha(fam, w, pairs[i].first);
      const ProcessSample b = build_u_alpha(fam, w, pairs[i].second);
      acc[i].add(linear_combination(1.0, a, -1.0, b));
    }
    return acc;
  });
  auto total = fresh();
  for (const auto& part : parts) {
    for (std::size_t i = 0; i < total.size(); ++i) total[i].merge(part[i]);
  }

  ContinuityReport report;
  report.p = p;
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const double s = grid.node(pairs[i].first);
    const double sp = grid.node(pairs[i].second);
    const ContinuityPoint pt{s, sp, std::abs(sp - s), total[i].value()};
    report.points.push_back(pt);
    if (pt.gap > 0.0 && pt.difference > 0.0) {
      lx.push_back(std::log(pt.gap));
      ly.push_back(std::log(pt.difference));
    }
  }
  if (lx.size() >= 2) report.fit = fit_line(lx, ly);
  return report;
}

}  // namespace itolab

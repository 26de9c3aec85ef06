#include "itolab/control.hpp"

#include <cmath>

#include "itolab/batch.hpp"
#include "itolab/error.hpp"
#include "itolab/integrals.hpp"
#include "itolab/mixed_norms.hpp"
#include "itolab/simd/kernels.hpp"

namespace itolab {

namespace {

struct ErrorMoments {
  Moments error, reference, claim_error;

  void merge(const ErrorMoments& o) {
    error.merge(o.error);
    reference.merge(o.reference);
    claim_error.merge(o.claim_error);
  }
  void add(const ClosedLoopPaths& paths) {
    for (std::size_t m = 0; m < paths.terminal.size(); ++m) {
      const double d = paths.terminal[m] - paths.grid_target[m];
      const double e = paths.terminal[m] - paths.claim[m];
      error.add(d * d);
      reference.add(paths.grid_target[m] * paths.grid_target[m]);
      claim_error.add(e * e);
    }
  }
  TerminalError result() const {
    TerminalError t{error.mean_estimate(), reference.mean_estimate(), 0.0, claim_error.mean_estimate(), 0.0};
    const double ref = t.reference.value;
    t.relative = ref > 0.0 ? t.error.value / ref : 0.0;
    t.claim_relative = ref > 0.0 ? t.claim_error.value / ref : 0.0;
    return t;
  }
};

}  // namespace

void validate(const ScalarSystem& sys) {
  require(sys.horizon > 0.0, ErrorKind::InvalidArgument, "system horizon must be positive");
  require(std::isfinite(sys.b) && std::isfinite(sys.sigma) && std::isfinite(sys.x0),
          ErrorKind::InvalidArgument, "system coefficients must be finite");
}

ProcessSample residual_integrand(const ScalarSystem& sys, const ClaimSpec& target,
                                 const BrownianEnsemble& w) {
  ProcessSample zeta = claim_zeta(target, w);
  const TimeGrid& grid = w.grid();
  for (std::size_t k = 0; k < grid.cells(); ++k) {
    const double noise = sys.sigma * std::exp(sys.b * (grid.horizon() - grid.node(k)));
    for (double& z : zeta.values.row(k)) z -= noise;
  }
  return zeta;
}

SynthesizedControl synthesize_control(const ScalarSystem& sys, const ClaimSpec& target,
                                      const BrownianEnsemble& w, double alpha, double eps,
                                      KernelNode node) {
  validate(sys);
  const TimeGrid& grid = w.grid();
  require(std::abs(grid.horizon() - sys.horizon) <= 1e-12 * sys.horizon, ErrorKind::ShapeMismatch,
          "ensemble horizon differs from the system horizon");

  RepresentorFamily fam;
  fam.alpha = alpha;
  fam.schedule = {eps};
  fam.node = node;
  fam.zeta = [&sys, &target](const BrownianEnsemble& e) { return residual_integrand(sys, target, e); };
  validate_family(fam, grid);

  SynthesizedControl ctrl;
  ctrl.target = target;
  ctrl.target_mean = claim_mean(target, grid.horizon());
  ctrl.c = (ctrl.target_mean - std::exp(sys.b * sys.horizon) * sys.x0) / sys.horizon;
  ctrl.cut_node = grid.node_at_or_below(grid.horizon() - eps);
  ctrl.eps_eff = grid.horizon() - grid.node(ctrl.cut_node);
  ctrl.v = build_u_alpha(fam, w);
  for (std::size_t k = ctrl.cut_node; k <= grid.cells(); ++k) {
    for (double& x : ctrl.v.values.row(k)) x = 0.0;
  }
  ctrl.u = ProcessSample::zeros(grid, w.path_count(), w.first_path());
  for (std::size_t k = 0; k <= grid.cells(); ++k) {
    const double damp = std::exp(-sys.b * (grid.horizon() - grid.node(k)));
    auto out = ctrl.u.values.row(k);
    const auto v = ctrl.v.values.row(k);
    for (std::size_t m = 0; m < out.size(); ++m) out[m] = damp * (ctrl.c + v[m]);
  }
  return ctrl;
}

ClosedLoopPaths simulate_closed_loop(const ScalarSystem& sys, const SynthesizedControl& ctrl,
                                     const BrownianEnsemble& w) {
  require_same_shape(ctrl.u, w);
  const TimeGrid& grid = w.grid();
  const std::size_t paths = w.path_count();
  ClosedLoopPaths out;
  out.terminal.assign(paths, sys.x0);
  std::vector<double> drive(paths);
  for (std::size_t k = 0; k < grid.cells(); ++k) {
    const double dt = grid.step(k);
    simd::scale(drive, w.increment(k), sys.sigma);
    simd::add_scaled(drive, ctrl.u.values.row(k), dt);
    simd::add_scaled(out.terminal, drive, 1.0);
    simd::scale(out.terminal, out.terminal, std::exp(sys.b * dt));
  }
  const ClaimSample claim = evaluate_claim(ctrl.target, w);
  out.grid_target = ito_terminal(claim.zeta, w);
  for (double& x : out.grid_target) x += claim.mean;
  out.claim = claim.xi;
  return out;
}

std::vector<ControlCurvePoint> control_error_curve(const ScalarSystem& sys, const ClaimSpec& target,
                                                   const TimeGrid& grid, std::size_t paths,
                                                   std::uint64_t seed, double alpha,
                                                   const std::vector<double>& eps_schedule,
                                                   std::size_t batch_paths) {
  require(!eps_schedule.empty(), ErrorKind::InvalidArgument, "eps schedule is empty");
  const auto parts = map_path_batches(grid, paths, seed, batch_paths, [&](const BrownianEnsemble& w) {
    std::vector<ErrorMoments> out(eps_schedule.size());
    for (std::size_t i = 0; i < eps_schedule.size(); ++i) {
      const SynthesizedControl ctrl = synthesize_control(sys, target, w, alpha, eps_schedule[i]);
      out[i].add(simulate_closed_loop(sys, ctrl, w));
    }
    return out;
  });
  std::vector<ControlCurvePoint> curve;
  for (std::size_t i = 0; i < eps_schedule.size(); ++i) {
    ErrorMoments total;
    for (const auto& part : parts) total.merge(part[i]);
    const std::size_t cut = grid.node_at_or_below(grid.horizon() - eps_schedule[i]);
    curve.push_back({eps_schedule[i], grid.horizon() - grid.node(cut), cut, total.result()});
  }
  return curve;
}

NormBlowupReport norm_blowup_report(const ScalarSystem& sys, const ClaimSpec& target,
                                    const TimeGrid& grid, std::size_t paths, std::uint64_t seed,
                                    double alpha, const std::vector<double>& eps_schedule,
                                    std::vector<double> q_list, double p, std::size_t batch_paths) {
  require(!eps_schedule.empty() && !q_list.empty(), ErrorKind::InvalidArgument,
          "norm report needs eps and q values");
  std::vector<std::size_t> cuts;
  for (double eps : eps_schedule) cuts.push_back(grid.node_at_or_below(grid.horizon() - eps));

  auto fresh = [&] {
    std::vector<MixedNormAccumulator> acc;
    for (std::size_t i = 0; i < eps_schedule.size(); ++i) {
      for (double q : q_list) acc.emplace_back(grid, MixedNormSpec{p, q, NormOrder::TimeOuter}, cuts[i]);
    }
    return acc;
  };
  const auto parts = map_path_batches(grid, paths, seed, batch_paths, [&](const BrownianEnsemble& w) {
    // The smallest eps keeps v on the widest range; the norm over [0, t_K]
    // for a larger eps only reads cells below that eps's own cut.
    const SynthesizedControl ctrl = synthesize_control(sys, target, w, alpha, eps_schedule.back());
    auto acc = fresh();
    for (auto& a : acc) a.add(ctrl.u);
    return acc;
  });
  auto total = fresh();
  for (const auto& part : parts) {
    for (std::size_t i = 0; i < total.size(); ++i) total[i].merge(part[i]);
  }

  NormBlowupReport report;
  report.p = p;
  report.q_list = q_list;
  const std::size_t nq = q_list.size();
  for (std::size_t i = 0; i < eps_schedule.size(); ++i) {
    for (std::size_t j = 0; j < nq; ++j) {
      report.rows.push_back({eps_schedule[i], cuts[i], q_list[j], total[i * nq + j].value()});
    }
  }
  for (std::size_t j = 0; j < nq; ++j) {
    std::vector<double> lx, ly, values;
    for (std::size_t i = 0; i < eps_schedule.size(); ++i) {
      const double v = total[i * nq + j].value();
      values.push_back(v);
      if (v > 0.0) {
        lx.push_back(-std::log(eps_schedule[i]));
        ly.push_back(std::log(v));
      }
    }
    report.growth_exponents.push_back(lx.size() >= 2 ? fit_line(lx, ly).slope : 0.0);
    bool inc = values.size() >= 2;
    for (std::size_t i = 0; i + 1 < values.size(); ++i) inc = inc && values[i + 1] > values[i];
    report.increasing.push_back(inc);
    const std::size_t n = values.size();
    report.last_step_ratio.push_back(n >= 2 && values[n - 2] > 0.0 ? values[n - 1] / values[n - 2] : 1.0);
  }
  return report;
}

}  // namespace itolab

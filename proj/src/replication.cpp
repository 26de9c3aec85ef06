#include "itolab/replication.hpp"

#include <cmath>

#include "itolab/batch.hpp"
#include "itolab/error.hpp"
#include "itolab/integrals.hpp"
#include "itolab/simd/kernels.hpp"

namespace itolab {

void validate(const DegenerateMarket& mkt) {
  require(mkt.maturity > 0.0, ErrorKind::InvalidMarket, "maturity must be positive");
  require(mkt.b - mkt.r > 0.0, ErrorKind::InvalidMarket,
          "degenerate market needs stock drift above the interest rate (b - r > 0)");
}

Replication replicate_claim(const DegenerateMarket& mkt, const ClaimSpec& claim,
                            const BrownianEnsemble& w, double eps, double alpha, KernelNode node) {
  validate(mkt);
  const TimeGrid& grid = w.grid();
  require(std::abs(grid.horizon() - mkt.maturity) <= 1e-12 * mkt.maturity, ErrorKind::ShapeMismatch,
          "ensemble horizon differs from the maturity");

  const ClaimSample c = evaluate_claim(claim, w);
  RepresentorFamily fam;
  fam.alpha = alpha;
  fam.schedule = {eps};
  fam.node = node;
  fam.zeta = [&c](const BrownianEnsemble&) { return c.zeta; };
  validate_family(fam, grid);

  Replication rep;
  const double T = mkt.maturity;
  const double excess = mkt.b - mkt.r;
  rep.y0 = std::exp(-mkt.r * T) * c.mean;
  rep.cut_node = grid.node_at_or_below(T - eps);
  rep.eps_eff = T - grid.node(rep.cut_node);
  rep.claim = c.xi;
  rep.grid_target = ito_terminal(c.zeta, w);
  for (double& x : rep.grid_target) x += c.mean;

  const ProcessSample v = build_u_alpha(fam, w);
  rep.z = ProcessSample::zeros(grid, w.path_count(), w.first_path());
  for (std::size_t k = 0; k < rep.cut_node; ++k) {
    const double factor = std::exp(mkt.r * grid.node(k)) * std::exp(-mkt.r * T) / excess;
    simd::scale(rep.z.values.row(k), v.values.row(k), factor);
  }

  rep.y = ProcessSample::zeros(grid, w.path_count(), w.first_path());
  std::vector<double> discounted(w.path_count(), rep.y0);
  for (std::size_t k = 0; k <= grid.cells(); ++k) {
    simd::scale(rep.y.values.row(k), discounted, std::exp(mkt.r * grid.node(k)));
    if (k == grid.cells()) break;
    const double weight = std::exp(-mkt.r * grid.node(k)) * excess * grid.step(k);
    simd::add_scaled(discounted, rep.z.values.row(k), weight);
  }
  return rep;
}

std::vector<ReplicationCurvePoint> replication_error_curve(const DegenerateMarket& mkt,
                                                           const ClaimSpec& claim,
                                                           const TimeGrid& grid, std::size_t paths,
                                                           std::uint64_t seed,
                                                           const std::vector<double>& eps_schedule,
                                                           double alpha, std::size_t batch_paths) {
  validate(mkt);
  require(!eps_schedule.empty(), ErrorKind::InvalidArgument, "eps schedule is empty");
  struct Part {
    Moments error, reference, claim_error;
  };
  const auto parts = map_path_batches(grid, paths, seed, batch_paths, [&](const BrownianEnsemble& w) {
    std::vector<Part> out(eps_schedule.size());
    for (std::size_t i = 0; i < eps_schedule.size(); ++i) {
      const Replication rep = replicate_claim(mkt, claim, w, eps_schedule[i], alpha);
      const auto yT = rep.y.values.row(grid.cells());
      for (std::size_t m = 0; m < yT.size(); ++m) {
        const double d = yT[m] - rep.grid_target[m];
        const double e = yT[m] - rep.claim[m];
        out[i].error.add(d * d);
        out[i].reference.add(rep.grid_target[m] * rep.grid_target[m]);
        out[i].claim_error.add(e * e);
      }
    }
    return out;
  });
  std::vector<ReplicationCurvePoint> curve;
  for (std::size_t i = 0; i < eps_schedule.size(); ++i) {
    Part total;
    for (const auto& part : parts) {
      total.error.merge(part[i].error);
      total.reference.merge(part[i].reference);
      total.claim_error.merge(part[i].claim_error);
    }
    TerminalError t{total.error.mean_estimate(), total.reference.mean_estimate(), 0.0,
                    total.claim_error.mean_estimate(), 0.0};
    const double ref = t.reference.value;
    t.relative = ref > 0.0 ? t.error.value / ref : 0.0;
    t.claim_relative = ref > 0.0 ? t.claim_error.value / ref : 0.0;
    const std::size_t cut = grid.node_at_or_below(grid.horizon() - eps_schedule[i]);
    curve.push_back({eps_schedule[i], grid.horizon() - grid.node(cut), cut, t});
  }
  return curve;
}

}  // namespace itolab

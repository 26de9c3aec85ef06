#include "itolab/cli/run.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "itolab/batch.hpp"
#include "itolab/clark_ocone.hpp"
#include "itolab/control.hpp"
#include "itolab/csv.hpp"
#include "itolab/error.hpp"
#include "itolab/integrals.hpp"
#include "itolab/mixed_norms.hpp"
#include "itolab/random.hpp"
#include "itolab/replication.hpp"
#include "itolab/representor.hpp"
#include "itolab/sharpness.hpp"
#include "itolab/version.hpp"

namespace itolab::cli {

namespace {

using ojson = nlohmann::ordered_json;
constexpr double kInf = std::numeric_limits<double>::infinity();

struct Check {
  std::string name;
  bool pass = true;
  std::string detail;
};

struct Outcome {
  std::vector<Check> checks;
  ojson summary = ojson::object();
  std::vector<std::pair<std::string, std::string>> files;  // name, contents
};

std::string fmt(double x) { return format_double(x); }

ojson estimate_json(const Estimate& e) { return {{"value", e.value}, {"stderr", e.se}}; }

std::vector<double> default_schedule(double horizon) {
  std::vector<double> out;
  for (double f : kDefaultEpsFractions) out.push_back(f * horizon);
  return out;
}

void strictly_decreasing(Section& s, const std::string& key, const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] < v[i - 1])) s.error(key, "values must be strictly decreasing");
  }
}

// Oracle rows: z-score against a closed form, within `tol` standard errors.
std::string oracle_flag(const Estimate& e, std::optional<double> oracle, double tol, bool& all_ok) {
  if (!oracle) return "none";
  const bool ok = e.within(*oracle, tol);
  all_ok = all_ok && ok;
  return ok ? "pass" : "fail";
}

// --------------------------------------------------------------- paths

Outcome run_paths(RunConfig& cfg, Section& blk) {
  const bool write_values = blk.flag("writeValues", true);
  const double band = blk.real_in("band", 5.0, 0.0, kInf, true, true);
  blk.finish();

  const TimeGrid grid = cfg.grid.make();
  const std::size_t cells = grid.cells();
  struct Part {
    std::vector<Moments> incr, incr_sq;
    Moments cross;
    std::string rows;
  };
  const auto parts = map_path_batches(grid, cfg.paths, cfg.seed, cfg.batch_paths, [&](const BrownianEnsemble& w) {
    Part p;
    p.incr.resize(cells);
    p.incr_sq.resize(cells);
    for (std::size_t k = 0; k < cells; ++k) {
      for (double d : w.increment(k)) {
        p.incr[k].add(d);
        p.incr_sq[k].add(d * d);
      }
    }
    if (cells >= 2) {
      const auto a = w.increment(0);
      const auto b = w.increment(1);
      for (std::size_t m = 0; m < a.size(); ++m) p.cross.add(a[m] * b[m]);
    }
    if (write_values) {
      const std::string block = ensemble_csv(grid, w.values());
      p.rows = block.substr(block.find('\n') + 1);
    }
    return p;
  });

  Outcome out;
  std::string csv = grid_csv(grid);
  csv = csv.substr(0, csv.find('\n') + 1);
  std::vector<Moments> incr(cells), incr_sq(cells);
  Moments cross;
  for (const Part& p : parts) {
    for (std::size_t k = 0; k < cells; ++k) {
      incr[k].merge(p.incr[k]);
      incr_sq[k].merge(p.incr_sq[k]);
    }
    cross.merge(p.cross);
    csv += p.rows;
  }
  if (write_values) out.files.emplace_back("paths.csv", csv);
  out.files.emplace_back("paths_grid.csv", grid_csv(grid));

  CsvTable stats({"cell", "t", "dt", "increment_mean", "mean_stderr", "increment_variance", "variance_stderr"});
  double worst_mean = 0.0, worst_var = 0.0;
  for (std::size_t k = 0; k < cells; ++k) {
    const Estimate mean = incr[k].mean_estimate();
    const Estimate second = incr_sq[k].mean_estimate();
    stats.row({static_cast<long long>(k), grid.node(k), grid.step(k), mean.value, mean.se, second.value, second.se});
    worst_mean = std::max(worst_mean, mean.z_score(0.0));
    worst_var = std::max(worst_var, second.z_score(grid.step(k)));
  }
  out.files.emplace_back("paths_increments.csv", stats.str());
  out.checks.push_back({"increment-mean", worst_mean <= band, "worst |z| = " + fmt(worst_mean)});
  out.checks.push_back({"increment-variance", worst_var <= band, "worst |z| = " + fmt(worst_var)});
  if (cells >= 2) {
    const Estimate c = cross.mean_estimate();
    out.checks.push_back({"disjoint-covariance", c.z_score(0.0) <= band, "|z| = " + fmt(c.z_score(0.0))});
    out.summary["disjointCovariance"] = estimate_json(c);
  }
  out.summary["worstMeanZ"] = worst_mean;
  out.summary["worstVarianceZ"] = worst_var;
  return out;
}

// ------------------------------------------------------------ isometry

Outcome run_isometry(RunConfig& cfg, Section& blk) {
  const std::string kind = blk.text("integrand", "exponential");
  double rate = 0.0, value = 0.0;
  if (kind == "exponential") {
    rate = blk.real("rate", 1.0);
  } else if (kind == "constant") {
    value = blk.real("value", 1.0);
  } else {
    blk.error("integrand", "expected \"exponential\" or \"constant\"");
  }
  const double tol = blk.real_in("tolerance", 3.0, 0.0, kInf, true, true);
  const double band = blk.real_in("band", 5.0, 0.0, kInf, true, true);
  blk.finish();

  const TimeGrid grid = cfg.grid.make();
  const double T = grid.horizon();
  auto f = [&](double t) { return kind == "exponential" ? std::exp(rate * t) : value; };
  const double closed = kind == "exponential"
                            ? (rate == 0.0 ? T : std::expm1(2.0 * rate * T) / (2.0 * rate))
                            : value * value * T;
  const std::size_t nodes = grid.cells() + 1;
  struct Part {
    std::vector<Moments> level, square;
    std::vector<double> terminal;
  };
  const auto parts = map_path_batches(grid, cfg.paths, cfg.seed, cfg.batch_paths, [&](const BrownianEnsemble& w) {
    const ProcessSample zeta = ProcessSample::deterministic(grid, w.path_count(), f, w.first_path());
    const PartialIntegralProcess I = ito_integral(zeta, w);
    Part p;
    p.level.resize(nodes);
    p.square.resize(nodes);
    for (std::size_t k = 0; k < nodes; ++k) {
      for (double x : I.values.row(k)) {
        p.level[k].add(x);
        p.square[k].add(x * x);
      }
    }
    const auto last = I.values.row(nodes - 1);
    p.terminal.assign(last.begin(), last.end());
    return p;
  });
  std::vector<Moments> level(nodes), square(nodes);
  std::vector<double> terminal;
  for (const Part& p : parts) {
    for (std::size_t k = 0; k < nodes; ++k) {
      level[k].merge(p.level[k]);
      square[k].merge(p.square[k]);
    }
    terminal.insert(terminal.end(), p.terminal.begin(), p.terminal.end());
  }

  Outcome out;
  CsvTable table({"node", "t", "mean", "mean_stderr", "second_moment", "second_moment_stderr", "isometry_sum"});
  double isometry = 0.0, worst_mean = 0.0, worst_iso = 0.0;
  for (std::size_t k = 0; k < nodes; ++k) {
    if (k > 0) isometry += f(grid.node(k - 1)) * f(grid.node(k - 1)) * grid.step(k - 1);
    const Estimate m = level[k].mean_estimate();
    const Estimate s = square[k].mean_estimate();
    table.row({static_cast<long long>(k), grid.node(k), m.value, m.se, s.value, s.se, isometry});
    worst_mean = std::max(worst_mean, m.z_score(0.0));
    if (k > 0) worst_iso = std::max(worst_iso, s.z_score(isometry));
  }
  out.files.emplace_back("isometry.csv", table.str());
  const Estimate var = variance_estimate(terminal);
  out.checks.push_back({"martingale-mean", worst_mean <= band, "worst |z| = " + fmt(worst_mean)});
  out.checks.push_back({"discrete-isometry", worst_iso <= band, "worst |z| = " + fmt(worst_iso)});
  out.checks.push_back({"terminal-variance", var.within(closed, tol),
                        "variance " + fmt(var.value) + " +- " + fmt(var.se) + " vs " + fmt(closed)});
  out.summary["terminalVariance"] = estimate_json(var);
  out.summary["closedForm"] = closed;
  out.summary["discreteIsometry"] = isometry;
  return out;
}

// -------------------------------------------------------------- verify

Outcome run_verify(RunConfig& cfg, Section& blk) {
  const TimeGrid grid = cfg.grid.make();
  const double T = grid.horizon();
  const ClaimSpec claim = blk.claim("claim", ClaimSpec::linear());
  const double alpha = blk.real_in("alpha", 0.0, 0.0, 1.0, false, true);
  const double p = blk.real_in("p", 2.0, 1.0, kInf, false, true);
  const std::vector<double> schedule = blk.reals("epsSchedule", default_schedule(T));
  strictly_decreasing(blk, "epsSchedule", schedule);
  const KernelNode node = [&] {
    const std::string n = blk.text("kernelNode", to_string(KernelNode::IncrementEnd));
    try {
      return parse_kernel_node(n);
    } catch (const Error& e) {
      blk.error("kernelNode", e.what());
    }
  }();
  const double fraction = blk.real_in("finalFraction", kDefaultFinalFraction, 0.0, kInf, false, true);
  const double tol = blk.real_in("tolerance", 3.0, 0.0, kInf, true, true);
  blk.finish();

  RepresentorFamily fam{alpha, claim_integrand_fn(claim), schedule, node};
  try {
    validate_family(fam, grid);
  } catch (const Error& e) {
    blk.error("epsSchedule", e.what());
  }
  const RepresentationCurve curve =
      verify_representation(fam, grid, cfg.paths, cfg.seed, p, fraction, cfg.batch_paths);

  // Linear claim (zeta = scale) at alpha = 0, p = 2: the grid error is
  // scale^2 sum_j c_j^2 dt_j with c_j = (t_K - t_{j+1}) / (T - t_kernel) - 1
  // below the cut and -1 above it; the continuous limit is
  // scale^2 (2 eps - eps^2 / T). Deterministic claims have zero error.
  const bool linear_oracle = claim.tag == ClaimTag::Linear && alpha == 0.0 && p == 2.0;
  auto oracle = [&](std::size_t cut) -> std::optional<double> {
    if (claim_is_deterministic(claim)) return 0.0;
    if (!linear_oracle) return std::nullopt;
    double total = 0.0;
    for (std::size_t j = 0; j < grid.cells(); ++j) {
      const double kernel = T - grid.node(node == KernelNode::IncrementEnd ? j + 1 : j);
      const double c = j + 1 < cut ? (grid.node(cut) - grid.node(j + 1)) / kernel - 1.0 : -1.0;
      total += c * c * grid.step(j);
    }
    return claim.scale * claim.scale * total;
  };
  auto continuous = [&](double eps) -> std::optional<double> {
    if (claim_is_deterministic(claim)) return 0.0;
    if (!linear_oracle) return std::nullopt;
    return claim.scale * claim.scale * (2.0 * eps - eps * eps / T);
  };

  Outcome out;
  CsvTable table({"eps", "eps_eff", "cut_node", "estimate", "stderr", "oracle", "z_score", "flag", "continuous"});
  bool oracle_ok = true;
  for (const CurvePoint& pt : curve.points) {
    const auto o = oracle(pt.cut_node);
    const auto limit = continuous(pt.eps_eff);
    const std::string flag = oracle_flag(pt.error, o, tol, oracle_ok);
    table.row({pt.eps, pt.eps_eff, static_cast<long long>(pt.cut_node), pt.error.value, pt.error.se,
               o ? CsvTable::Cell(*o) : CsvTable::Cell(std::string()),
               o ? CsvTable::Cell(pt.error.z_score(*o)) : CsvTable::Cell(std::string()), flag,
               limit ? CsvTable::Cell(*limit) : CsvTable::Cell(std::string())});
  }
  out.files.emplace_back("verify.csv", table.str());
  out.checks.push_back({"decreasing", curve.decreasing, "1-SE slack between neighbours"});
  out.checks.push_back({"final-fraction", curve.final_fraction <= fraction,
                        "final/reference = " + fmt(curve.final_fraction) + " (limit " + fmt(fraction) + ")"});
  out.checks.push_back({"oracle", oracle_ok, "closed form within " + fmt(tol) + " SE where available"});
  out.summary["reference"] = estimate_json(curve.reference);
  out.summary["finalFraction"] = curve.final_fraction;
  return out;
}

// ------------------------------------------------------------- density

Outcome run_density(RunConfig& cfg, Section& blk) {
  const TimeGrid grid = cfg.grid.make();
  const ClaimSpec claim = blk.claim("claim", ClaimSpec::linear());
  const std::vector<double> deltas = blk.reals("deltas", std::vector<double>{0.5, 0.25, 0.1});
  strictly_decreasing(blk, "deltas", deltas);
  for (double d : deltas) {
    if (!(d > 0.0 && d < grid.horizon())) blk.error("deltas", "every delta must lie strictly inside (0, T)");
  }
  const double p = blk.real_in("p", 2.0, 1.0, kInf, false, true);
  const std::string source = blk.text("conditional", "oracle");
  if (source != "oracle" && source != "regression") blk.error("conditional", "expected \"oracle\" or \"regression\"");
  const std::size_t bins = blk.count("bins", 64, 1);
  const double tol = blk.real_in("tolerance", 3.0, 0.0, kInf, true, true);
  blk.finish();

  const auto curve = density_error_curve(claim, deltas, grid, cfg.paths, cfg.seed, p, source == "oracle", bins,
                                         cfg.batch_paths);
  auto oracle = [&](double delta_eff) -> std::optional<double> {
    if (claim_is_deterministic(claim)) return 0.0;
    if (claim.tag == ClaimTag::Linear && p == 2.0 && source == "oracle") return claim.scale * claim.scale * delta_eff;
    return std::nullopt;
  };
  Outcome out;
  CsvTable table({"delta", "delta_eff", "estimate", "stderr", "oracle", "z_score", "flag"});
  bool oracle_ok = true, decreasing = true;
  for (std::size_t i = 0; i < curve.size(); ++i) {
    const DensityPoint& pt = curve[i];
    const auto o = oracle(pt.delta_eff);
    const std::string flag = oracle_flag(pt.error, o, tol, oracle_ok);
    table.row({pt.delta, pt.delta_eff, pt.error.value, pt.error.se, o ? CsvTable::Cell(*o) : CsvTable::Cell(std::string()),
               o ? CsvTable::Cell(pt.error.z_score(*o)) : CsvTable::Cell(std::string()), flag});
    if (i > 0 && pt.error.value > curve[i - 1].error.value + std::hypot(pt.error.se, curve[i - 1].error.se)) {
      decreasing = false;
    }
  }
  out.files.emplace_back("density.csv", table.str());
  out.checks.push_back({"decreasing", decreasing, "error shrinks with delta (1-SE slack)"});
  out.checks.push_back({"oracle", oracle_ok, "closed form within " + fmt(tol) + " SE where available"});
  return out;
}

// ------------------------------------------------------- integrability

Outcome run_integrability(RunConfig& cfg, Section& blk) {
  const ClaimSpec claim = blk.claim("claim", ClaimSpec::linear());
  const double alpha = blk.real_in("alpha", 0.0, 0.0, 1.0, false, true);
  const double p = blk.real_in("p", 2.0, 1.0, kInf, false, true);
  const std::vector<double> q_list = blk.reals("qList", std::vector<double>{1.0, 2.0});
  for (double q : q_list) {
    if (!(q >= 1.0)) blk.error("qList", "every q must be >= 1");
  }
  const double rho = blk.real_in("ratio", cfg.grid.ratio.value_or(0.9), 0.0, 1.0, true, true);
  const std::size_t base = cfg.grid.cells;
  std::vector<std::size_t> refinements = blk.counts("refinements", std::vector<std::size_t>{base, 2 * base, 4 * base});
  for (std::size_t i = 0; i < refinements.size(); ++i) {
    if (refinements[i] < 2 || (i && refinements[i] <= refinements[i - 1])) {
      blk.error("refinements", "cell counts must be >= 2 and increasing");
    }
  }
  std::vector<std::string> expect;
  if (blk.has("expect")) {
    expect = blk.texts("expect");
    if (expect.size() != q_list.size()) blk.error("expect", "expected one entry per q");
    for (const auto& e : expect) {
      if (e != "stable" && e != "diverging") blk.error("expect", "entries must be \"stable\" or \"diverging\"");
    }
  }
  blk.finish();

  RepresentorFamily fam{alpha, claim_integrand_fn(claim), {}, KernelNode::IncrementEnd};
  const IntegrabilityReport rep = integrability_report(fam, q_list, p, cfg.grid.horizon, rho, refinements,
                                                       cfg.paths, cfg.seed, cfg.batch_paths);
  Outcome out;
  CsvTable table({"q", "cells", "terminal_gap", "omega_outer", "time_outer", "omega_outer_flag", "time_outer_flag"});
  auto word = [](bool d) { return std::string(d ? "diverging" : "stable"); };
  for (const IntegrabilityRow& row : rep.rows) {
    const IntegrabilityFlag* flag = nullptr;
    for (const auto& f : rep.flags) {
      if (f.q == row.q) flag = &f;
    }
    table.row({row.q, static_cast<long long>(row.cells), row.terminal_gap, row.omega_outer, row.time_outer,
               word(flag->omega_outer_diverging), word(flag->time_outer_diverging)});
  }
  out.files.emplace_back("integrability.csv", table.str());
  for (std::size_t i = 0; i < expect.size(); ++i) {
    const bool want = expect[i] == "diverging";
    const auto& f = rep.flags[i];
    out.checks.push_back({"q=" + fmt(f.q), f.omega_outer_diverging == want && f.time_outer_diverging == want,
                          "expected " + expect[i] + ", got " + word(f.omega_outer_diverging) + "/" +
                              word(f.time_outer_diverging)});
  }
  return out;
}

// ---------------------------------------------------------- continuity

Outcome run_continuity(RunConfig& cfg, Section& blk) {
  const TimeGrid grid = cfg.grid.make();
  const ClaimSpec claim = blk.claim("claim", ClaimSpec::linear());
  const double alpha = blk.real_in("alpha", 0.0, 0.0, 1.0, false, true);
  const double p = blk.real_in("p", 2.0, 1.0, kInf, false, true);
  const double s = blk.real_in("s", 0.5 * grid.horizon(), 0.0, grid.horizon(), true, true);
  std::vector<double> default_gaps;
  for (int i = 0; i < 8; ++i) default_gaps.push_back(0.25 * grid.horizon() / std::pow(2.0, i));
  const std::vector<double> gaps = blk.reals("gaps", default_gaps);
  blk.finish();

  const auto s_node = grid.find_node(s);
  if (!s_node) blk.error("s", "s must be a grid node");
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (double g : gaps) {
    const auto sp = grid.find_node(s + g);
    if (g < 0.0 || !sp) blk.error("gaps", "s + gap must be a grid node for every gap (" + fmt(g) + ")");
    pairs.emplace_back(*s_node, *sp);
  }
  RepresentorFamily fam{alpha, claim_integrand_fn(claim), {}, KernelNode::IncrementEnd};
  const ContinuityReport rep = continuity_modulus(fam, grid, pairs, cfg.paths, cfg.seed, p, cfg.batch_paths);
  Outcome out;
  CsvTable table({"s", "s_prime", "gap", "difference"});
  for (const auto& pt : rep.points) table.row({pt.s, pt.s_prime, pt.gap, pt.difference});
  out.files.emplace_back("continuity.csv", table.str());
  out.summary["exponent"] = rep.fit.slope;
  out.summary["rSquared"] = rep.fit.r_squared;
  return out;
}

// ------------------------------------------------------------- duality

Outcome run_duality(RunConfig& cfg, Section& blk) {
  const std::size_t tables = blk.count("tables", 500, 1);
  const std::size_t witness_trials = blk.count("witnessTrials", 100, 1);
  const std::size_t max_paths = blk.count("maxPaths", 8, 1);
  const std::size_t max_cells = blk.count("maxCells", 6, 2);
  const double max_exponent = blk.real_in("maxExponent", 4.0, 1.0, kInf, true, true);
  const double tol = blk.real_in("tolerance", 1e-10, 0.0, 1.0, false, true);
  const double witness_tol = blk.real_in("witnessTolerance", 1e-8, 0.0, 1.0, false, true);
  blk.finish();

  const StreamRng rng(cfg.seed);
  std::uint64_t draw = 0;
  auto uniform = [&] { return rng.uniform(0, draw++); };
  auto pick = [&](std::size_t lo, std::size_t hi) {
    return lo + static_cast<std::size_t>(uniform() * static_cast<double>(hi - lo + 1)) % (hi - lo + 1);
  };
  auto random_table = [&](const TimeGrid& grid, std::size_t paths) {
    ProcessSample f = ProcessSample::zeros(grid, paths);
    for (std::size_t k = 0; k < grid.cells(); ++k) {
      for (double& x : f.values.row(k)) {
        const double u = uniform();
        x = u < 0.1 ? 0.0 : rng.normal(1, draw++) * (1.0 + 3.0 * uniform());
      }
    }
    return f;
  };
  auto random_grid = [&](std::size_t cells) {
    if (uniform() < 0.5) return make_grid(0.5 + 1.5 * uniform(), cells, GridKind::Uniform);
    return make_grid(0.5 + 1.5 * uniform(), cells, GridKind::Geometric, 0.3 + 0.6 * uniform());
  };
  auto random_exponent = [&](bool allow_inf) -> Exponent {
    const double u = uniform();
    if (allow_inf && u < 0.08) return Exponent::infinity();
    if (u < 0.16) return Exponent(1.0);
    return Exponent(1.0 + (max_exponent - 1.0) * uniform());
  };
  auto rel_le = [&](double a, double b) { return a <= b + tol * std::max(std::abs(b), 1e-300); };

  Outcome out;
  CsvTable table({"trial", "kind", "paths", "cells", "p", "q", "lhs", "rhs", "ok"});
  std::size_t minkowski_bad = 0, holder_bad = 0, collapse_bad = 0, witness_bad = 0;
  for (std::size_t t = 0; t < tables; ++t) {
    const std::size_t paths = pick(1, max_paths);
    const TimeGrid grid = random_grid(pick(2, max_cells));
    const ProcessSample f = random_table(grid, paths);
    const ProcessSample g = random_table(grid, paths);
    const Exponent p = random_exponent(true);
    const Exponent q = random_exponent(true);
    const double omega = mixed_norm(f, {p, q, NormOrder::OmegaOuter});
    const double time = mixed_norm(f, {p, q, NormOrder::TimeOuter});
    // p <= q: time-outer <= omega-outer; q <= p: the reverse.
    bool ok = true;
    if (p.value() <= q.value()) ok = ok && rel_le(time, omega);
    if (q.value() <= p.value()) ok = ok && rel_le(omega, time);
    minkowski_bad += !ok;
    table.row({static_cast<long long>(t), std::string("minkowski"), static_cast<long long>(paths),
               static_cast<long long>(grid.cells()), to_string(p), to_string(q), time, omega,
               std::string(ok ? "1" : "0")});

    const double lhs = std::abs(pairing(f, g));
    const MixedNormSpec spec{p, q, NormOrder::OmegaOuter};
    const double rhs = omega * mixed_norm(g, spec.dual());
    const bool hok = rel_le(lhs, rhs);
    holder_bad += !hok;
    table.row({static_cast<long long>(t), std::string("holder"), static_cast<long long>(paths),
               static_cast<long long>(grid.cells()), to_string(p), to_string(q), lhs, rhs,
               std::string(hok ? "1" : "0")});

    const MixedNormSpec same{p, p, NormOrder::OmegaOuter};
    const double a = mixed_norm(f, same);
    const double b = mixed_norm(f, {p, p, NormOrder::TimeOuter});
    const bool cok = std::abs(a - b) <= 1e-12 * std::max(std::abs(a), 1e-300);
    collapse_bad += !cok;
    table.row({static_cast<long long>(t), std::string("collapse"), static_cast<long long>(paths),
               static_cast<long long>(grid.cells()), to_string(p), to_string(p), a, b,
               std::string(cok ? "1" : "0")});
  }
  double worst_ratio_low = 1.0, worst_ratio_high = 1.0;
  for (std::size_t t = 0; t < witness_trials; ++t) {
    const std::size_t paths = pick(1, max_paths);
    const TimeGrid grid = random_grid(pick(2, max_cells));
    ProcessSample g = random_table(grid, paths);
    g.values.at(0, 0) = 1.0 + uniform();  // never identically zero
    const double p = 1.0 + (max_exponent - 1.0) * (1.0 - uniform());
    const double q = 1.0 + (max_exponent - 1.0) * (1.0 - uniform());
    const ProcessSample f = extremal_dual_witness(g, p, q);
    const MixedNormSpec spec{p, q, NormOrder::OmegaOuter};
    const double ratio = pairing(f, g) / mixed_norm(g, spec.dual());
    const double fnorm = mixed_norm(f, spec);
    const bool ok = ratio >= 1.0 - witness_tol && ratio <= 1.0 + tol && std::abs(fnorm - 1.0) <= witness_tol;
    witness_bad += !ok;
    worst_ratio_low = std::min(worst_ratio_low, ratio);
    worst_ratio_high = std::max(worst_ratio_high, ratio);
    table.row({static_cast<long long>(t), std::string("witness"), static_cast<long long>(paths),
               static_cast<long long>(grid.cells()), fmt(p), fmt(q), ratio, fnorm, std::string(ok ? "1" : "0")});
  }
  out.files.emplace_back("duality.csv", table.str());
  out.checks.push_back({"minkowski", minkowski_bad == 0, std::to_string(minkowski_bad) + " violations"});
  out.checks.push_back({"holder", holder_bad == 0, std::to_string(holder_bad) + " violations"});
  out.checks.push_back({"p-equals-q", collapse_bad == 0, std::to_string(collapse_bad) + " disagreements"});
  out.checks.push_back({"witness", witness_bad == 0,
                        std::to_string(witness_bad) + " misses; ratio in [" + fmt(worst_ratio_low) + ", " +
                            fmt(worst_ratio_high) + "]"});
  out.summary["witnessRatioMin"] = worst_ratio_low;
  out.summary["witnessRatioMax"] = worst_ratio_high;
  return out;
}

// ----------------------------------------------------------- sharpness

Outcome run_sharpness(RunConfig& cfg, Section& blk) {
  SharpnessConfig sc;
  sc.p = blk.real_in("p", 2.0, 1.0, kInf, true, true);
  sc.r = blk.real_in("r", 2.0, 1.0, kInf, true, true);
  sc.s = cfg.grid.horizon;
  std::vector<std::size_t> n_default{1, 2, 3, 4, 5, 10, 20, 50};
  for (std::size_t n : blk.counts("nList", n_default)) sc.n_list.push_back(static_cast<int>(n));
  try {
    validate(sc);
  } catch (const Error& e) {
    blk.error("nList", e.what());
  }
  const std::vector<std::size_t> mc_n = blk.counts("mcList", std::vector<std::size_t>{1, 2});
  const double tol = blk.real_in("tolerance", 3.0, 0.0, kInf, true, true);
  blk.finish();
  if (cfg.grid.kind != GridKind::Uniform) throw ConfigError("/grid/kind: sharpness Monte Carlo needs a uniform grid");

  const RatioDecay decay = ratio_decay(sc);
  Outcome out;
  CsvTable table({"n", "eta_norm", "conditional_exact", "conditional_bound", "ratio", "ratio_bound"});
  for (const RatioRow& r : decay.rows) {
    table.row({static_cast<long long>(r.n), r.eta_norm, r.conditional_exact, r.conditional_bound, r.ratio, r.ratio_bound});
  }
  out.files.emplace_back("sharpness.csv", table.str());

  CsvTable mc({"n", "quantity", "closed_form", "monte_carlo", "stderr", "z_score", "flag"});
  bool mc_ok = true;
  const double pc = sc.p_prime(), rc = sc.r_prime();
  for (std::size_t n : mc_n) {
    const int ni = static_cast<int>(n);
    const Estimate eta = eta_norm_mc(ni, sc.s, pc, cfg.grid.cells, cfg.paths, cfg.seed);
    const double eta_closed = eta_norm(ni, sc.s, pc);
    const bool a = eta.within(eta_closed, tol);
    const Estimate cond = conditional_norm_mc(ni, sc.s, pc, rc, cfg.grid.cells, cfg.paths, cfg.seed);
    const double cond_closed = conditional_norm(ni, sc.s, pc, rc, ConditionalMode::ExactQuadrature);
    const bool b = cond.within(cond_closed, tol);
    mc_ok = mc_ok && a && b;
    mc.row({static_cast<long long>(n), std::string("eta_norm"), eta_closed, eta.value, eta.se, eta.z_score(eta_closed),
            std::string(a ? "pass" : "fail")});
    mc.row({static_cast<long long>(n), std::string("conditional_norm"), cond_closed, cond.value, cond.se,
            cond.z_score(cond_closed), std::string(b ? "pass" : "fail")});
  }
  out.files.emplace_back("sharpness_mc.csv", mc.str());
  out.checks.push_back({"ratio-within-bound", decay.ratio_within_bound, "ratio <= bound (1 + 1e-9)"});
  out.checks.push_back({"exact-within-bound", decay.exact_within_bound, "quadrature value <= displayed bound"});
  out.checks.push_back({"bound-decreasing", decay.bound_decreasing, "strictly, for n > 1"});
  out.checks.push_back({"monte-carlo", mc_ok, "closed forms within " + fmt(tol) + " SE"});
  return out;
}

// ------------------------------------------------- control / replicate

void add_curve_rows(CsvTable& table, double eps, double eps_eff, std::size_t cut, const TerminalError& t) {
  table.row({eps, eps_eff, static_cast<long long>(cut), t.relative, t.error.value, t.error.se, t.reference.value,
             t.claim_relative});
}

const std::vector<std::string> kCurveHeader{"eps", "eps_eff", "cut_node", "relative_error", "error",
                                            "error_stderr", "reference", "claim_relative_error"};

bool nonincreasing(const std::vector<TerminalError>& errs) {
  for (std::size_t i = 1; i < errs.size(); ++i) {
    if (errs[i].error.value > errs[i - 1].error.value + std::hypot(errs[i].error.se, errs[i - 1].error.se)) return false;
  }
  return true;
}

Outcome run_control(RunConfig& cfg, Section& blk) {
  const TimeGrid grid = cfg.grid.make();
  ScalarSystem sys;
  sys.b = blk.real("b", 0.0);
  sys.sigma = blk.real("sigma", 1.0);
  sys.x0 = blk.real("x0", 0.0);
  sys.horizon = grid.horizon();
  const ClaimSpec target = blk.claim("target", ClaimSpec::square());
  const double alpha = blk.real_in("alpha", 0.0, 0.0, 1.0, false, true);
  const std::vector<double> schedule = blk.reals("epsSchedule", default_schedule(grid.horizon()));
  strictly_decreasing(blk, "epsSchedule", schedule);
  const std::vector<double> q_list = blk.reals("qList", std::vector<double>{1.0, 1.5, 2.0});
  const double p = blk.real_in("p", 2.0, 1.0, kInf, false, true);
  const double max_rel = blk.real_in("maxRelativeError", 0.05, 0.0, kInf, false, true);
  blk.finish();
  try {
    validate_family({alpha, nullptr, schedule, KernelNode::IncrementEnd}, grid);
  } catch (const Error& e) {
    blk.error("epsSchedule", e.what());
  }

  const auto curve = control_error_curve(sys, target, grid, cfg.paths, cfg.seed, alpha, schedule, cfg.batch_paths);
  const NormBlowupReport norms =
      norm_blowup_report(sys, target, grid, cfg.paths, cfg.seed, alpha, schedule, q_list, p, cfg.batch_paths);

  Outcome out;
  CsvTable table(kCurveHeader);
  std::vector<TerminalError> errs;
  for (const auto& pt : curve) {
    add_curve_rows(table, pt.eps, pt.eps_eff, pt.cut_node, pt.terminal);
    errs.push_back(pt.terminal);
  }
  out.files.emplace_back("control.csv", table.str());
  CsvTable ntable({"eps", "cut_node", "q", "norm"});
  for (const auto& r : norms.rows) ntable.row({r.eps, static_cast<long long>(r.cut_node), r.q, r.norm});
  out.files.emplace_back("control_norms.csv", ntable.str());

  const double last = curve.back().terminal.relative;
  out.checks.push_back({"terminal-relative-error", last <= max_rel, fmt(last) + " (limit " + fmt(max_rel) + ")"});
  out.checks.push_back({"error-nonincreasing", nonincreasing(errs), "1-SE slack"});
  ojson growth = ojson::array();
  for (std::size_t j = 0; j < norms.q_list.size(); ++j) {
    growth.push_back({{"q", norms.q_list[j]},
                      {"growthExponent", norms.growth_exponents[j]},
                      {"increasing", static_cast<bool>(norms.increasing[j])},
                      {"lastStepRatio", norms.last_step_ratio[j]}});
    // Only meaningful when the stochastic part is present.
    bool active = false;
    for (const auto& r : norms.rows) active = active || r.norm > 0.0;
    if (!active) continue;
    if (norms.q_list[j] == 2.0) {
      out.checks.push_back({"q2-grows", static_cast<bool>(norms.increasing[j]), "norm increases as eps decreases"});
    }
    if (norms.q_list[j] == 1.0) {
      out.checks.push_back({"q1-plateau", norms.last_step_ratio[j] < 1.1,
                            "last-step ratio " + fmt(norms.last_step_ratio[j])});
    }
  }
  out.summary["norms"] = growth;
  return out;
}

Outcome run_replicate(RunConfig& cfg, Section& blk) {
  const TimeGrid grid = cfg.grid.make();
  DegenerateMarket mkt;
  mkt.r = blk.real("r", 0.05);
  mkt.b = blk.real("b", 0.1);
  mkt.maturity = grid.horizon();
  const ClaimSpec claim = blk.claim("claim", ClaimSpec::square());
  const double alpha = blk.real_in("alpha", 0.0, 0.0, 1.0, false, true);
  const std::vector<double> schedule = blk.reals("epsSchedule", default_schedule(grid.horizon()));
  strictly_decreasing(blk, "epsSchedule", schedule);
  const double max_rel = blk.real_in("maxRelativeError", 0.05, 0.0, kInf, false, true);
  blk.finish();
  try {
    validate(mkt);
  } catch (const Error& e) {
    blk.error("b", e.what());
  }
  try {
    validate_family({alpha, nullptr, schedule, KernelNode::IncrementEnd}, grid);
  } catch (const Error& e) {
    blk.error("epsSchedule", e.what());
  }

  const auto curve = replication_error_curve(mkt, claim, grid, cfg.paths, cfg.seed, schedule, alpha, cfg.batch_paths);
  Outcome out;
  CsvTable table(kCurveHeader);
  std::vector<TerminalError> errs;
  for (const auto& pt : curve) {
    add_curve_rows(table, pt.eps, pt.eps_eff, pt.cut_node, pt.terminal);
    errs.push_back(pt.terminal);
  }
  out.files.emplace_back("replicate.csv", table.str());
  const double last = curve.back().terminal.relative;
  out.checks.push_back({"terminal-relative-error", last <= max_rel, fmt(last) + " (limit " + fmt(max_rel) + ")"});
  out.checks.push_back({"error-nonincreasing", nonincreasing(errs), "1-SE slack"});
  return out;
}

Outcome dispatch(RunConfig& cfg, Section& blk) {
  switch (cfg.command) {
    case Command::Paths: return run_paths(cfg, blk);
    case Command::Isometry: return run_isometry(cfg, blk);
    case Command::Verify: return run_verify(cfg, blk);
    case Command::Density: return run_density(cfg, blk);
    case Command::Integrability: return run_integrability(cfg, blk);
    case Command::Continuity: return run_continuity(cfg, blk);
    case Command::Duality: return run_duality(cfg, blk);
    case Command::Sharpness: return run_sharpness(cfg, blk);
    case Command::Control: return run_control(cfg, blk);
    case Command::Replicate: return run_replicate(cfg, blk);
  }
  throw ConfigError("unknown command");
}

}  // namespace

RunResult run(Command command, const std::string& config_text, const std::string& out_dir,
              std::optional<std::uint64_t> seed_override) {
  RunResult result;
  Outcome outcome;
  ojson manifest;
  try {
    RunConfig cfg = parse_config(config_text, command, seed_override);
    Section blk = cfg.block();
    outcome = dispatch(cfg, blk);
    // command and version lead, whether or not the input named them.
    manifest["command"] = cfg.resolved["command"];
    manifest["version"] = kVersion;
    for (const auto& [key, value] : cfg.resolved.items()) {
      if (key != "command" && key != "version") manifest[key] = value;
    }
  } catch (const ConfigError& e) {
    result.exit_code = kInvalidConfig;
    result.message = std::string("invalid config: ") + e.what();
    return result;
  } catch (const Error& e) {
    result.exit_code = kInvalidConfig;
    result.message = std::string("invalid config (") + std::string(to_string(e.kind())) + "): " + e.what();
    return result;
  }

  bool pass = true;
  ojson checks = ojson::array();
  std::string failed;
  for (const Check& c : outcome.checks) {
    pass = pass && c.pass;
    checks.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    if (!c.pass) failed += (failed.empty() ? "" : ", ") + c.name + " (" + c.detail + ")";
  }
  ojson summary;
  summary["command"] = to_string(command);
  summary["pass"] = pass;
  summary["checks"] = checks;
  for (auto& [k, v] : outcome.summary.items()) summary[k] = v;

  std::filesystem::create_directories(out_dir.empty() ? "." : out_dir);
  const std::filesystem::path dir(out_dir.empty() ? "." : out_dir);
  for (const auto& [name, text] : outcome.files) {
    write_text(dir / name, text);
    result.written.push_back((dir / name).string());
  }
  write_text(dir / "manifest.json", manifest.dump(2) + "\n");
  write_text(dir / "summary.json", summary.dump(2) + "\n");
  result.written.push_back((dir / "manifest.json").string());
  result.written.push_back((dir / "summary.json").string());

  result.exit_code = pass ? kPass : kAssertionFailure;
  result.message = (pass ? "PASS " : "FAIL ") + to_string(command) + (failed.empty() ? "" : ": " + failed);
  return result;
}

int main_entry(int argc, char** argv) {
  CLI::App app{"Monte Carlo laboratory for Bochner representations of Ito integrals"};
  app.set_version_flag("--version", std::string(kVersion));
  std::string command_name, config_path, out_dir;
  std::uint64_t seed_value = 0;
  app.add_option("command", command_name, "one of: paths isometry verify density integrability continuity "
                                          "duality sharpness control replicate")
      ->required();
  app.add_option("--config", config_path, "JSON run configuration")->required();
  app.add_option("--out", out_dir, "output directory (default $ITOLAB_OUT, else .)");
  CLI::Option* seed_opt = app.add_option("--seed", seed_value, "override the configuration seed");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kInvalidConfig;
  }

  const auto command = parse_command(command_name);
  if (!command) {
    std::cerr << "invalid config: unknown command '" << command_name << "'\n";
    return kInvalidConfig;
  }
  std::ifstream in(config_path, std::ios::binary);
  if (!in) {
    std::cerr << "invalid config: cannot read " << config_path << "\n";
    return kInvalidConfig;
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  if (out_dir.empty()) {
    if (const char* env = std::getenv("ITOLAB_OUT")) out_dir = env;
  }
  std::optional<std::uint64_t> seed;
  if (seed_opt->count() > 0) seed = seed_value;
  const RunResult r = run(*command, buffer.str(), out_dir, seed);
  (r.exit_code == kInvalidConfig ? std::cerr : std::cout) << r.message << "\n";
  return r.exit_code;
}

}  // namespace itolab::cli

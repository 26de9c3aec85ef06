#include <catch_amalgamated.hpp>

#include <cmath>

#include "itolab/batch.hpp"
#include "itolab/error.hpp"
#include "itolab/integrals.hpp"
#include "itolab/representor.hpp"
#include "itolab/stats.hpp"
#include "oracles.hpp"

using namespace itolab;

namespace {

RepresentorFamily unit_family(KernelNode node = KernelNode::IncrementEnd, double alpha = 0.0) {
  return {alpha, constant_integrand_fn(1.0), {0.2, 0.1}, node};
}

}  // namespace

TEST_CASE("kernel node names") {
  CHECK(to_string(KernelNode::IncrementEnd) == "increment-end");
  CHECK(parse_kernel_node("increment-start") == KernelNode::IncrementStart);
  CHECK_THROWS_AS(parse_kernel_node("middle"), Error);
}

TEST_CASE("u_0 for a unit integrand unrolled by hand") {
  const TimeGrid g = make_grid(1.0, 12, GridKind::Geometric, 0.8);
  const BrownianEnsemble w = sample_brownian(g, 7, 21);
  for (KernelNode node : {KernelNode::IncrementStart, KernelNode::IncrementEnd}) {
    const ProcessSample u = build_u_alpha(unit_family(node), w);
    for (std::size_t m = 0; m < 7; ++m) {
      double expect = 0.0;
      for (std::size_t k = 0; k < 12; ++k) {
        REQUIRE(u.at(k, m) == Catch::Approx(expect).epsilon(1e-12).margin(1e-300));
        const double gap = 1.0 - g.node(node == KernelNode::IncrementStart ? k : k + 1);
        if (k + 1 < 12) expect += w.increment(k)[m] / gap;
      }
      CHECK(u.at(12, m) == 0.0);
    }
  }
}

TEST_CASE("u_alpha with alpha > 0 by hand") {
  const TimeGrid g = make_grid(2.0, 6, GridKind::Uniform);
  const BrownianEnsemble w = sample_brownian(g, 3, 2);
  const double a = 0.4;
  RepresentorFamily fam{a, claim_integrand_fn(ClaimSpec::square()), {0.5}, KernelNode::IncrementEnd};
  const ProcessSample u = build_u_alpha(fam, w);
  for (std::size_t m = 0; m < 3; ++m) {
    double inner = 0.0;
    for (std::size_t k = 0; k < 6; ++k) {
      const double expect = (1.0 - a) * std::pow(2.0 - g.node(k), -a) * inner;
      REQUIRE(u.at(k, m) == Catch::Approx(expect).epsilon(1e-12).margin(1e-300));
      if (k + 1 < 6) {
        inner += 2.0 * w.at_node(k)[m] * w.increment(k)[m] * std::pow(2.0 - g.node(k + 1), a - 1.0);
      }
    }
  }
}

TEST_CASE("zero integrand gives a zero representor and a zero error curve") {
  const TimeGrid g = make_grid(1.0, 50, GridKind::Geometric, 0.9);
  RepresentorFamily fam{0.3, constant_integrand_fn(0.0), {0.2, 0.1, 0.05}, KernelNode::IncrementEnd};
  const BrownianEnsemble w = sample_brownian(g, 100, 1);
  const ProcessSample u = build_u_alpha(fam, w);
  for (std::size_t k = 0; k <= 50; ++k) {
    for (double x : u.values.row(k)) REQUIRE(x == 0.0);
  }
  const RepresentationCurve c = verify_representation(fam, g, 500, 1, 2.0);
  for (const auto& pt : c.points) CHECK(pt.error.value == 0.0);
  CHECK(c.reference.value == 0.0);
}

TEST_CASE("variance of u_0(0.5) matches the isometry integral") {
  const TimeGrid g = make_grid(1.0, 1000, GridKind::Uniform);
  for (KernelNode node : {KernelNode::IncrementStart, KernelNode::IncrementEnd}) {
    const auto parts = map_path_batches(g, 40000, 13, 0, [&](const BrownianEnsemble& w) {
      const ProcessSample u = build_u_alpha(unit_family(node), w);
      const auto row = u.values.row(500);
      return std::vector<double>(row.begin(), row.end());
    });
    std::vector<double> all;
    for (const auto& p : parts) all.insert(all.end(), p.begin(), p.end());
    CHECK(std::abs(variance_estimate(all).value - 1.0) < 0.05);
  }
}

TEST_CASE("discrete stochastic Fubini holds to rounding") {
  const TimeGrid g = make_grid(1.0, 60, GridKind::Geometric, 0.92);
  const BrownianEnsemble w = sample_brownian(g, 40, 3);
  const ClaimSpec claim = ClaimSpec::cube();
  const ProcessSample zeta = claim_zeta(claim, w);
  for (KernelNode node : {KernelNode::IncrementStart, KernelNode::IncrementEnd}) {
    RepresentorFamily fam{0.0, claim_integrand_fn(claim), {0.1}, node};
    const ProcessSample u = build_u_alpha(fam, w);
    for (std::size_t K : {1, 10, 37, 59}) {
      const auto lhs = lebesgue_integral(u, K);
      for (std::size_t m = 0; m < 40; ++m) {
        double rhs = 0.0;
        for (std::size_t j = 0; j + 1 < K; ++j) {
          const double kernel = 1.0 - g.node(node == KernelNode::IncrementStart ? j : j + 1);
          rhs += zeta.at(j, m) * w.increment(j)[m] * (g.node(K) - g.node(j + 1)) / kernel;
        }
        REQUIRE(std::abs(lhs[m] - rhs) <= 1e-10 * std::max(1.0, std::abs(rhs)));
      }
    }
  }
}

TEST_CASE("zeta to u_alpha is linear") {
  const TimeGrid g = make_grid(1.0, 40, GridKind::Geometric, 0.9);
  const BrownianEnsemble w = sample_brownian(g, 30, 6);
  auto fam_of = [](IntegrandFn f) { return RepresentorFamily{0.5, std::move(f), {0.1}, KernelNode::IncrementEnd}; };
  const auto sq = claim_integrand_fn(ClaimSpec::square());
  const auto geo = claim_integrand_fn(ClaimSpec::geometric(0.7));
  const ProcessSample us = build_u_alpha(fam_of(sq), w);
  const ProcessSample ug = build_u_alpha(fam_of(geo), w);
  const ProcessSample uc = build_u_alpha(
      fam_of([&](const BrownianEnsemble& x) { return linear_combination(2.0, sq(x), -3.0, geo(x)); }), w);
  for (std::size_t k = 0; k <= 40; ++k) {
    for (std::size_t m = 0; m < 30; ++m) {
      const double rhs = 2.0 * us.at(k, m) - 3.0 * ug.at(k, m);
      REQUIRE(std::abs(uc.at(k, m) - rhs) <= 1e-10 * std::max(1.0, std::abs(rhs)));
    }
  }
}

TEST_CASE("error curve for a unit integrand matches the closed forms") {
  const TimeGrid g = make_grid(1.0, 1000, GridKind::Uniform);
  RepresentorFamily fam{0.0, constant_integrand_fn(1.0), {0.1, 0.01}, KernelNode::IncrementEnd};
  const RepresentationCurve c = verify_representation(fam, g, 40000, 5, 2.0);
  REQUIRE(c.points.size() == 2);
  for (const auto& pt : c.points) {
    INFO("eps " << pt.eps << " estimate " << pt.error.value << " +- " << pt.error.se);
    CHECK(pt.error.within(oracle::unit_representation_error_discrete(g.nodes(), pt.cut_node), 3.0));
  }
  // Away from the grid scale the discrete and continuous errors agree.
  CHECK(c.points[0].error.within(oracle::unit_representation_error(0.1, 1.0), 3.0));
  CHECK(c.points[0].cut_node == 900);
  CHECK(c.points[1].cut_node == 990);
  CHECK(c.decreasing);
  CHECK(c.pass);
}

TEST_CASE("single-ensemble and batched verification agree") {
  const TimeGrid g = make_grid(1.0, 80, GridKind::Geometric, 0.95);
  RepresentorFamily fam{0.0, claim_integrand_fn(ClaimSpec::square()), {0.2, 0.05}, KernelNode::IncrementEnd};
  const RepresentationCurve a = verify_representation(fam, sample_brownian(g, 3000, 8), 2.0);
  const RepresentationCurve b = verify_representation(fam, g, 3000, 8, 2.0, kDefaultFinalFraction, 3000);
  for (std::size_t i = 0; i < 2; ++i) CHECK(a.points[i].error.value == b.points[i].error.value);
  CHECK(a.reference.value == b.reference.value);
}

TEST_CASE("square-claim error curve on a geometric grid") {
  const TimeGrid g = make_grid(1.0, 400, GridKind::Geometric, 0.9);
  RepresentorFamily fam{0.0, claim_integrand_fn(ClaimSpec::square()),
                        {0.2, 0.1, 0.05, 0.02, 0.01}, KernelNode::IncrementEnd};
  const RepresentationCurve c = verify_representation(fam, g, 20000, 9, 2.0);
  CHECK(c.decreasing);
  CHECK(c.points.back().error.value <= 0.05 * c.reference.value);
  CHECK(c.pass);
}

TEST_CASE("family validation") {
  const TimeGrid g = make_grid(1.0, 10, GridKind::Uniform);
  auto fam = unit_family();
  CHECK_NOTHROW(validate_family(fam, g));
  fam.alpha = 1.0;
  CHECK_THROWS_AS(validate_family(fam, g), Error);
  fam = unit_family();
  fam.schedule = {0.1, 0.2};
  CHECK_THROWS_AS(validate_family(fam, g), Error);
  fam.schedule = {1.0};
  CHECK_THROWS_AS(validate_family(fam, g), Error);
  fam.schedule = {0.05};  // below the terminal gap 0.1
  CHECK_THROWS_AS(validate_family(fam, g), Error);
  fam.schedule = {};
  CHECK_THROWS_AS(validate_family(fam, g), Error);
  fam = unit_family();
  fam.alpha = -0.1;
  CHECK_THROWS_AS(build_u_alpha(fam, sample_brownian(g, 2, 1)), Error);
}

TEST_CASE("density approximation integrates to the conditional expectation") {
  const TimeGrid g = make_grid(1.0, 100, GridKind::Uniform);
  const BrownianEnsemble w = sample_brownian(g, 500, 4);
  const ClaimSample c = evaluate_claim(ClaimSpec::square(), w);
  const DensityApprox d = density_approx(c.xi, 0.25, w, ConditionalOracle{c.mean, &c.zeta});
  CHECK(d.cut_node == 75);
  CHECK(d.delta_eff == Catch::Approx(0.25));
  const auto integral = lebesgue_integral(d.u, 100);
  for (std::size_t m = 0; m < 500; ++m) {
    REQUIRE(std::abs(integral[m] - d.xi_cut[m]) <= 1e-10 * std::max(1.0, std::abs(d.xi_cut[m])));
    REQUIRE(d.xi_cut[m] == Catch::Approx(c.mean + [&] {
              double s = 0.0;
              for (std::size_t j = 0; j < 75; ++j) s += c.zeta.at(j, m) * w.increment(j)[m];
              return s;
            }()));
  }
  const DensityApprox k = density_approx(std::vector<double>(500, 3.0), 0.1, w);
  for (double x : lebesgue_integral(k.u, 100)) CHECK(x == Catch::Approx(3.0).epsilon(1e-12));
  for (std::size_t j = 0; j < 90; ++j) {
    for (double x : k.u.values.row(j)) REQUIRE(x == 0.0);
  }
  CHECK_THROWS_AS(density_approx(c.xi, 1.0, w), Error);
  CHECK_THROWS_AS(density_approx(c.xi, 0.0, w), Error);
}

TEST_CASE("density error for a linear claim equals delta") {
  const TimeGrid g = make_grid(1.0, 100, GridKind::Uniform);
  for (bool oracle : {true, false}) {
    const auto curve = density_error_curve(ClaimSpec::linear(), {0.5, 0.25, 0.1}, g, 40000, 6, 2.0, oracle);
    for (const auto& pt : curve) {
      INFO("oracle " << oracle << " delta " << pt.delta << " estimate " << pt.error.value);
      if (oracle) {
        CHECK(pt.error.within(pt.delta_eff, 3.0));
      } else {
        // Regression adds the within-bin spread of W(T - delta).
        CHECK(std::abs(pt.error.value - pt.delta_eff) < 0.02);
      }
    }
  }
}

TEST_CASE("divergence rule") {
  CHECK(refinement_diverges({1.0, 2.0, 3.0}));
  CHECK(refinement_diverges({1.0, 1.5, 1.8}));
  CHECK_FALSE(refinement_diverges({1.0, 1.5, 1.6}));
  CHECK_FALSE(refinement_diverges({1.0, 2.0}));
  CHECK_FALSE(refinement_diverges({0.0, 0.0, 0.0}));
}

TEST_CASE("integrability flags inside and outside the admissible window") {
  const std::vector<std::size_t> refinements{30, 60, 120};
  {
    RepresentorFamily fam{0.0, constant_integrand_fn(1.0), {}, KernelNode::IncrementEnd};
    const auto rep = integrability_report(fam, {2.0}, 2.0, 1.0, 0.85, refinements, 4000, 1);
    CHECK(rep.flags[0].omega_outer_diverging);
    CHECK(rep.flags[0].time_outer_diverging);
  }
  {
    RepresentorFamily fam{0.6, constant_integrand_fn(1.0), {}, KernelNode::IncrementEnd};
    const auto rep = integrability_report(fam, {1.2}, 2.0, 1.0, 0.85, refinements, 4000, 1);
    CHECK_FALSE(rep.flags[0].omega_outer_diverging);
    CHECK_FALSE(rep.flags[0].time_outer_diverging);
    REQUIRE(rep.rows.size() == 3);
    CHECK(rep.rows[0].terminal_gap > rep.rows[2].terminal_gap);
  }
  {
    RepresentorFamily fam{0.3, constant_integrand_fn(0.0), {}, KernelNode::IncrementEnd};
    const auto rep = integrability_report(fam, {1.0, 2.0}, 2.0, 1.0, 0.85, refinements, 200, 1);
    for (const auto& row : rep.rows) {
      CHECK(row.omega_outer == 0.0);
      CHECK(row.time_outer == 0.0);
    }
  }
}

TEST_CASE("continuity modulus") {
  const TimeGrid g = make_grid(1.0, 100, GridKind::Uniform);
  RepresentorFamily fam{0.0, constant_integrand_fn(1.0), {}, KernelNode::IncrementEnd};
  const auto same = continuity_modulus(fam, g, {{50, 50}}, 100, 3, 2.0);
  CHECK(same.points[0].difference == 0.0);
  const auto rep = continuity_modulus(fam, g, {{50, 60}, {50, 55}, {50, 52}}, 4000, 3, 2.0);
  CHECK(rep.points[0].difference > 0.0);
  CHECK(std::isfinite(rep.points[0].difference));
  CHECK(rep.points[0].gap == Catch::Approx(0.1));
  CHECK(rep.points[1].difference < rep.points[0].difference);
  CHECK(rep.fit.slope > 0.0);
  CHECK_THROWS_AS(continuity_modulus(fam, g, {{0, 5}}, 10, 1, 2.0), Error);
}

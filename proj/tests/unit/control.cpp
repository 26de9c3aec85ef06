#include <catch_amalgamated.hpp>

#include <cmath>

#include "itolab/control.hpp"
#include "itolab/error.hpp"
#include "itolab/integrals.hpp"

using namespace itolab;

TEST_CASE("noise-matched linear target needs no control") {
  const TimeGrid g = make_grid(1.0, 200, GridKind::Uniform);
  const BrownianEnsemble w = sample_brownian(g, 300, 2);
  const ScalarSystem sys{0.0, 1.0, 0.0, 1.0};
  const SynthesizedControl ctrl = synthesize_control(sys, ClaimSpec::linear(), w, 0.0, 0.05);
  CHECK(ctrl.c == 0.0);
  for (std::size_t k = 0; k <= 200; ++k) {
    for (double x : ctrl.u.values.row(k)) REQUIRE(x == 0.0);
  }
  const ClosedLoopPaths out = simulate_closed_loop(sys, ctrl, w);
  for (std::size_t m = 0; m < 300; ++m) {
    REQUIRE(std::abs(out.terminal[m] - out.grid_target[m]) < 1e-12);
    REQUIRE(std::abs(out.terminal[m] - out.claim[m]) < 1e-12);
  }
}

TEST_CASE("deterministic system reaches a constant target with a constant control") {
  const TimeGrid g = make_grid(2.0, 64, GridKind::Geometric, 0.95);
  const BrownianEnsemble w = sample_brownian(g, 10, 3);
  const ScalarSystem sys{0.0, 0.0, 0.5, 2.0};
  const SynthesizedControl ctrl = synthesize_control(sys, ClaimSpec::constant(3.0), w, 0.0, 0.2);
  CHECK(ctrl.c == Catch::Approx(1.25));
  for (std::size_t k = 0; k <= 64; ++k) {
    for (double x : ctrl.u.values.row(k)) REQUIRE(x == Catch::Approx(1.25));
  }
  for (double x : simulate_closed_loop(sys, ctrl, w).terminal) CHECK(x == Catch::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("terminal state decomposes into drift, control and noise sums") {
  const TimeGrid g = make_grid(1.0, 100, GridKind::Geometric, 0.97);
  const BrownianEnsemble w = sample_brownian(g, 50, 4);
  const ScalarSystem sys{-0.7, 0.4, 1.5, 1.0};
  const SynthesizedControl ctrl = synthesize_control(sys, ClaimSpec::square(), w, 0.3, 0.05);
  const ClosedLoopPaths out = simulate_closed_loop(sys, ctrl, w);
  const auto control_integral = lebesgue_integral(ctrl.v, 100);
  for (std::size_t m = 0; m < 50; ++m) {
    double noise = 0.0;
    for (std::size_t k = 0; k < 100; ++k) noise += sys.sigma * std::exp(sys.b * (1.0 - g.node(k))) * w.increment(k)[m];
    const double expect = std::exp(sys.b) * sys.x0 + ctrl.c + control_integral[m] + noise;
    REQUIRE(std::abs(out.terminal[m] - expect) <= 1e-10 * std::max(1.0, std::abs(expect)));
  }
}

TEST_CASE("residual integrand subtracts the propagated noise") {
  const TimeGrid g = make_grid(1.0, 20, GridKind::Uniform);
  const BrownianEnsemble w = sample_brownian(g, 5, 5);
  const ScalarSystem sys{0.5, 2.0, 0.0, 1.0};
  const ProcessSample z = residual_integrand(sys, ClaimSpec::square(), w);
  for (std::size_t k = 0; k < 20; ++k) {
    for (std::size_t m = 0; m < 5; ++m) {
      const double expect = 2.0 * w.at_node(k)[m] - 2.0 * std::exp(0.5 * (1.0 - g.node(k)));
      REQUIRE(z.at(k, m) == Catch::Approx(expect).margin(1e-14));
    }
  }
}

TEST_CASE("v vanishes from the cut on") {
  const TimeGrid g = make_grid(1.0, 100, GridKind::Uniform);
  const BrownianEnsemble w = sample_brownian(g, 20, 6);
  const ScalarSystem sys{0.2, 1.0, 0.0, 1.0};
  const SynthesizedControl ctrl = synthesize_control(sys, ClaimSpec::cube(), w, 0.0, 0.1);
  CHECK(ctrl.cut_node == 90);
  CHECK(ctrl.eps_eff == Catch::Approx(0.1));
  for (std::size_t k = 90; k <= 100; ++k) {
    for (double x : ctrl.v.values.row(k)) REQUIRE(x == 0.0);
  }
}

TEST_CASE("square target error curve shrinks") {
  const TimeGrid g = make_grid(1.0, 400, GridKind::Geometric, 0.9);
  const ScalarSystem sys{0.5, 1.0, 0.0, 1.0};
  const auto curve = control_error_curve(sys, ClaimSpec::square(), g, 4000, 7, 0.0, {0.2, 0.05, 0.01});
  REQUIRE(curve.size() == 3);
  CHECK(curve[0].terminal.error.value > curve[1].terminal.error.value);
  CHECK(curve[1].terminal.error.value > curve[2].terminal.error.value);
  CHECK(curve[2].terminal.relative < 0.05);
}

TEST_CASE("norm report is zero when no control is needed") {
  const TimeGrid g = make_grid(1.0, 200, GridKind::Uniform);
  const ScalarSystem sys{0.0, 1.0, 0.0, 1.0};
  const auto rep = norm_blowup_report(sys, ClaimSpec::linear(), g, 200, 8, 0.0, {0.1, 0.05});
  REQUIRE(rep.rows.size() == 6);
  for (const auto& row : rep.rows) CHECK(row.norm == 0.0);
  for (double slope : rep.growth_exponents) CHECK(slope == 0.0);
}

TEST_CASE("system validation") {
  CHECK_THROWS_AS(validate(ScalarSystem{0.0, 1.0, 0.0, 0.0}), Error);
  CHECK_THROWS_AS(validate(ScalarSystem{std::nan(""), 1.0, 0.0, 1.0}), Error);
  const TimeGrid g = make_grid(2.0, 10, GridKind::Uniform);
  CHECK_THROWS_AS(synthesize_control(ScalarSystem{}, ClaimSpec::linear(), sample_brownian(g, 2, 1), 0.0, 0.5), Error);
}

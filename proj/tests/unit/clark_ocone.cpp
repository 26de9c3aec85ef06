#include <catch_amalgamated.hpp>

#include <cmath>

#include "itolab/batch.hpp"
#include "itolab/clark_ocone.hpp"
#include "itolab/error.hpp"
#include "itolab/integrals.hpp"
#include "oracles.hpp"

using namespace itolab;

TEST_CASE("catalog closed forms") {
  const double T = 1.5;
  CHECK(claim_payoff(ClaimSpec::linear(), 0.7, T) == 0.7);
  CHECK(claim_payoff(ClaimSpec::square(), 0.7, T) == Catch::Approx(0.49));
  CHECK(claim_payoff(ClaimSpec::cube(), 0.7, T) == Catch::Approx(0.343));
  CHECK(claim_payoff(ClaimSpec::geometric(0.5), 0.7, T) == Catch::Approx(std::exp(0.35 - 0.125 * T)));
  CHECK(claim_payoff(ClaimSpec::constant(2.0), 0.7, T) == 2.0);
  CHECK(claim_payoff(ClaimSpec::polynomial({1.0, 0.0, 3.0}), 0.7, T) == Catch::Approx(1.0 + 3.0 * 0.49));

  CHECK(claim_mean(ClaimSpec::linear(), T) == 0.0);
  CHECK(claim_mean(ClaimSpec::square(), T) == Catch::Approx(T));
  CHECK(claim_mean(ClaimSpec::cube(), T) == 0.0);
  CHECK(claim_mean(ClaimSpec::geometric(1.3), T) == Catch::Approx(1.0));
  // E W^4 = 3 T^2.
  CHECK(claim_mean(ClaimSpec::polynomial({0.0, 0.0, 0.0, 0.0, 1.0}), T) == Catch::Approx(3.0 * T * T));

  CHECK(claim_integrand(ClaimSpec::linear(), 0.2, 0.4, T) == 1.0);
  CHECK(claim_integrand(ClaimSpec::square(), 0.2, 0.4, T) == Catch::Approx(0.8));
  CHECK(claim_integrand(ClaimSpec::cube(), 0.2, 0.4, T) == Catch::Approx(3 * 0.16 + 3 * (T - 0.2)));
  CHECK(claim_integrand(ClaimSpec::geometric(2.0), 0.2, 0.4, T) == Catch::Approx(2.0 * std::exp(0.8 - 0.4)));
  // W^4: d/dw (w^4 + 6 w^2 tau + 3 tau^2) = 4 w^3 + 12 w tau.
  CHECK(claim_integrand(ClaimSpec::polynomial({0, 0, 0, 0, 1}), 0.2, 0.4, T) ==
        Catch::Approx(4 * 0.064 + 12 * 0.4 * (T - 0.2)));
  CHECK(claim_is_deterministic(ClaimSpec::constant(1.0)));
  CHECK_FALSE(claim_is_deterministic(ClaimSpec::square()));

  ClaimSpec scaled = ClaimSpec::square();
  scaled.scale = 2.0;
  CHECK(claim_payoff(scaled, 0.7, T) == Catch::Approx(0.98));
}

TEST_CASE("claim json round trip and errors") {
  for (const ClaimSpec& s : {ClaimSpec::linear(), ClaimSpec::square(), ClaimSpec::cube(), ClaimSpec::geometric(0.4),
                             ClaimSpec::constant(-1.5), ClaimSpec::polynomial({1.0, 2.0})}) {
    const ClaimSpec back = parse_claim(claim_json(s));
    CHECK(back.tag == s.tag);
    CHECK(back.value == s.value);
    CHECK(back.sigma == s.sigma);
    CHECK(back.coefficients == s.coefficients);
  }
  CHECK(parse_claim(R"({"tag":"square","scale":3})").scale == 3.0);
  CHECK_THROWS_AS(parse_claim(R"({"tag":"digital"})"), Error);
  CHECK_THROWS_AS(parse_claim(R"({"tag":"geometric","sigma":"x"})"), Error);
  CHECK_THROWS_AS(parse_claim("not json"), Error);
  CHECK_THROWS_AS(parse_claim_tag("call"), Error);
}

TEST_CASE("linear claim telescopes exactly") {
  const TimeGrid g = make_grid(1.0, 30, GridKind::Geometric, 0.85);
  const BrownianEnsemble w = sample_brownian(g, 50, 4);
  const ClaimSample c = evaluate_claim(ClaimSpec::linear(), w);
  const auto ito = ito_terminal(c.zeta, w);
  for (std::size_t m = 0; m < 50; ++m) CHECK(c.xi[m] - c.mean == ito[m]);
}

TEST_CASE("zeta is adapted and vanishes from the horizon node on") {
  const TimeGrid g = make_grid(1.0, 10, GridKind::Uniform);
  const BrownianEnsemble w = sample_brownian(g, 5, 4);
  const ClaimSample c = evaluate_claim(ClaimSpec::square(), w, 6);
  CHECK(c.zeta.adapted);
  CHECK(c.mean == Catch::Approx(0.6));
  for (std::size_t k = 0; k < 6; ++k) {
    for (std::size_t m = 0; m < 5; ++m) CHECK(c.zeta.at(k, m) == 2.0 * w.at_node(k)[m]);
  }
  for (std::size_t k = 6; k <= 10; ++k) {
    for (double x : c.zeta.values.row(k)) CHECK(x == 0.0);
  }
  for (std::size_t m = 0; m < 5; ++m) CHECK(c.xi[m] == w.at_node(6)[m] * w.at_node(6)[m]);
}

TEST_CASE("geometric claim mean matches MC within 5 SE") {
  const TimeGrid g = make_grid(1.0, 2, GridKind::Uniform);
  const auto parts = map_path_batches(g, 200000, 31, 0, [](const BrownianEnsemble& w) {
    Moments m;
    for (double x : evaluate_claim(ClaimSpec::geometric(1.0), w).xi) m.add(x);
    return m;
  });
  Moments total;
  for (const auto& p : parts) total.merge(p);
  CHECK(total.mean_estimate().within(1.0, 5.0));
}

TEST_CASE("representation residuals under refinement") {
  const auto linear = representation_residual(ClaimSpec::linear(), 1.0, {10, 20}, 1000, 1);
  for (const auto& r : linear) CHECK(r.residual.value == 0.0);

  const auto square = representation_residual(ClaimSpec::square(), 1.0, {100, 200, 400}, 20000, 2);
  for (const auto& r : square) {
    const TimeGrid g = make_grid(1.0, r.cells, GridKind::Uniform);
    INFO("N = " << r.cells << " residual " << r.residual.value << " +- " << r.residual.se);
    CHECK(r.residual.within(oracle::square_residual(g.nodes()), 3.0));
  }

  const auto geo = representation_residual(ClaimSpec::geometric(1.0), 1.0, {50, 100, 200, 400}, 20000, 3);
  for (std::size_t i = 1; i < geo.size(); ++i) {
    const double ratio = geo[i].residual.value / geo[i - 1].residual.value;
    INFO("ratio " << ratio);
    CHECK(ratio >= 0.4);
    CHECK(ratio <= 0.6);
  }
  CHECK_THROWS_AS(representation_residual(ClaimSpec::square(), 1.0, {20, 10}, 10, 1), Error);
}

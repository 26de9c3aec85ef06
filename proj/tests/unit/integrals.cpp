#include <catch_amalgamated.hpp>

#include <cmath>

#include "itolab/batch.hpp"
#include "itolab/error.hpp"
#include "itolab/integrals.hpp"
#include "itolab/stats.hpp"
#include "oracles.hpp"

using namespace itolab;

TEST_CASE("zero integrand gives zero integral") {
  const TimeGrid g = make_grid(1.0, 10, GridKind::Uniform);
  const BrownianEnsemble w = sample_brownian(g, 20, 1);
  const auto I = ito_integral(ProcessSample::zeros(g, 20), w);
  for (std::size_t k = 0; k <= 10; ++k) {
    for (double x : I.values.row(k)) REQUIRE(x == 0.0);
  }
}

TEST_CASE("unit integrand reproduces W bit for bit") {
  const TimeGrid g = make_grid(1.0, 50, GridKind::Geometric, 0.9);
  const BrownianEnsemble w = sample_brownian(g, 33, 7);
  const auto I = ito_integral(ProcessSample::constant(g, 33, 1.0), w);
  CHECK(I.values == w.values());
  const auto terminal = ito_terminal(ProcessSample::constant(g, 33, 1.0), w);
  for (std::size_t m = 0; m < 33; ++m) CHECK(terminal[m] == w.at_node(50)[m]);
}

TEST_CASE("left-endpoint sum by hand") {
  const TimeGrid g = make_grid(1.0, 3, GridKind::Uniform);
  const BrownianEnsemble w = sample_brownian(g, 4, 11);
  const auto zeta = ProcessSample::markov(w, [](double t, double x) { return t + x * x; });
  const auto I = ito_integral(zeta, w);
  for (std::size_t m = 0; m < 4; ++m) {
    double expect = 0.0;
    for (std::size_t j = 0; j < 3; ++j) {
      const double z = g.node(j) + w.at_node(j)[m] * w.at_node(j)[m];
      expect += z * (w.at_node(j + 1)[m] - w.at_node(j)[m]);
      CHECK(I.at(j + 1, m) == Catch::Approx(expect).epsilon(1e-12));
    }
    CHECK(I.at(0, m) == 0.0);
  }
}

TEST_CASE("lebesgue integral examples") {
  const TimeGrid g = make_grid(1.0, 4, GridKind::Uniform);
  const auto u = ProcessSample::deterministic(g, 3, [](double t) { return t; });
  for (double x : lebesgue_integral(u, 4)) CHECK(x == Catch::Approx(0.375).epsilon(1e-15));
  for (double x : lebesgue_integral(ProcessSample::constant(g, 3, 2.5), 4)) CHECK(x == Catch::Approx(2.5));
  for (double x : lebesgue_integral(ProcessSample::zeros(g, 3), 4)) CHECK(x == 0.0);
  for (double x : lebesgue_integral(u, 0)) CHECK(x == 0.0);
  CHECK_THROWS_AS(lebesgue_integral(u, 5), Error);
}

TEST_CASE("shape and adaptedness are enforced") {
  const TimeGrid g = make_grid(1.0, 4, GridKind::Uniform);
  const BrownianEnsemble w = sample_brownian(g, 5, 1);
  try {
    ito_integral(ProcessSample::zeros(g, 6), w);
    FAIL("expected shape mismatch");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ShapeMismatch);
  }
  try {
    ito_integral(ProcessSample::zeros(make_grid(1.0, 5, GridKind::Uniform), 5), w);
    FAIL("expected shape mismatch");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ShapeMismatch);
  }
  auto anticipating = ProcessSample::zeros(g, 5);
  anticipating.adapted = false;
  try {
    ito_integral(anticipating, w);
    FAIL("expected adaptedness violation");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::AdaptednessViolation);
  }
}

TEST_CASE("linearity in the integrand") {
  const TimeGrid g = make_grid(1.0, 40, GridKind::Geometric, 0.85);
  const BrownianEnsemble w = sample_brownian(g, 64, 5);
  const auto z1 = ProcessSample::markov(w, [](double t, double x) { return std::sin(x) + t; });
  const auto z2 = ProcessSample::markov(w, [](double, double x) { return x * x * x; });
  const auto lhs = ito_integral(linear_combination(1.7, z1, -0.3, z2), w);
  const auto i1 = ito_integral(z1, w);
  const auto i2 = ito_integral(z2, w);
  for (std::size_t k = 0; k <= 40; ++k) {
    for (std::size_t m = 0; m < 64; ++m) {
      const double rhs = 1.7 * i1.at(k, m) - 0.3 * i2.at(k, m);
      REQUIRE(std::abs(lhs.at(k, m) - rhs) <= 1e-10 * std::max(1.0, std::abs(rhs)));
    }
  }
}

TEST_CASE("isometry and martingale property for a deterministic integrand") {
  const TimeGrid g = make_grid(1.0, 200, GridKind::Uniform);
  auto f = [](double t) { return std::exp(t); };
  struct Part {
    std::vector<Moments> level;
    Moments square;
    std::vector<double> terminal;
  };
  const auto parts = map_path_batches(g, 100000, 77, 0, [&](const BrownianEnsemble& w) {
    const auto I = ito_integral(ProcessSample::deterministic(g, w.path_count(), f, w.first_path()), w);
    Part p{std::vector<Moments>(201), {}, {}};
    for (std::size_t k = 0; k <= 200; ++k) p.level[k].add(I.values.row(k));
    for (double x : I.values.row(200)) {
      p.square.add(x * x);
      p.terminal.push_back(x);
    }
    return p;
  });
  std::vector<Moments> level(201);
  Moments square;
  std::vector<double> terminal;
  for (const auto& p : parts) {
    for (std::size_t k = 0; k <= 200; ++k) level[k].merge(p.level[k]);
    square.merge(p.square);
    terminal.insert(terminal.end(), p.terminal.begin(), p.terminal.end());
  }
  double discrete = 0.0;
  for (std::size_t j = 0; j < 200; ++j) discrete += f(g.node(j)) * f(g.node(j)) * g.step(j);
  CHECK(square.mean_estimate().within(discrete, 5.0));
  for (std::size_t k = 0; k <= 200; ++k) REQUIRE(level[k].mean_estimate().within(0.0, 5.0));
  const double closed = oracle::exp_integrand_variance(1.0, 1.0);
  CHECK(std::abs(variance_estimate(terminal).value / closed - 1.0) < 0.03);
}

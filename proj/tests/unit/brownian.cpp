#include <catch_amalgamated.hpp>

#include <algorithm>

#include "itolab/batch.hpp"
#include "itolab/brownian.hpp"
#include "itolab/error.hpp"
#include "itolab/stats.hpp"

using namespace itolab;

TEST_CASE("ensembles are deterministic and extendable") {
  const TimeGrid g = make_grid(1.0, 16, GridKind::Geometric, 0.8);
  const BrownianEnsemble a = sample_brownian(g, 10, 99);
  const BrownianEnsemble b = sample_brownian(g, 10, 99);
  CHECK(a.values() == b.values());
  const BrownianEnsemble big = sample_brownian(g, 25, 99);
  const BrownianEnsemble tail = sample_brownian(g, 5, 99, 20);
  for (std::size_t k = 0; k <= 16; ++k) {
    for (std::size_t m = 0; m < 10; ++m) REQUIRE(big.values().at(k, m) == a.values().at(k, m));
    for (std::size_t m = 0; m < 5; ++m) REQUIRE(big.values().at(k, 20 + m) == tail.values().at(k, m));
  }
  CHECK_FALSE(sample_brownian(g, 10, 100).values() == a.values());
}

TEST_CASE("values are prefix sums of the increments, starting at zero") {
  const TimeGrid g = make_grid(1.0, 7, GridKind::Uniform);
  const BrownianEnsemble w = sample_brownian(g, 9, 3);
  for (std::size_t m = 0; m < 9; ++m) {
    double running = 0.0;
    CHECK(w.at_node(0)[m] == 0.0);
    for (std::size_t k = 0; k < 7; ++k) {
      running = 1.0 * running + 1.0 * w.increment(k)[m];
      REQUIRE(w.at_node(k + 1)[m] == running);
    }
  }
}

TEST_CASE("zero paths is invalid") {
  CHECK_THROWS_AS(sample_brownian(make_grid(1.0, 4, GridKind::Uniform), 0, 1), Error);
}

TEST_CASE("increment statistics within 5 SE") {
  const TimeGrid g = make_grid(1.0, 1000, GridKind::Uniform);
  constexpr std::size_t kPaths = 100000;
  struct Part {
    std::vector<Moments> mean, second;
    Moments cross;
  };
  const auto parts = map_path_batches(g, kPaths, 2024, 0, [&](const BrownianEnsemble& w) {
    Part p{std::vector<Moments>(1000), std::vector<Moments>(1000), {}};
    for (std::size_t k = 0; k < 1000; ++k) {
      for (double d : w.increment(k)) {
        p.mean[k].add(d);
        p.second[k].add(d * d);
      }
    }
    for (std::size_t m = 0; m < w.path_count(); ++m) p.cross.add(w.increment(10)[m] * w.increment(500)[m]);
    return p;
  });
  std::vector<Moments> mean(1000), second(1000);
  Moments cross;
  for (const auto& p : parts) {
    for (std::size_t k = 0; k < 1000; ++k) {
      mean[k].merge(p.mean[k]);
      second[k].merge(p.second[k]);
    }
    cross.merge(p.cross);
  }
  double worst_mean = 0.0, worst_var = 0.0;
  for (std::size_t k = 0; k < 1000; ++k) {
    REQUIRE(mean[k].count() == kPaths);
    worst_mean = std::max(worst_mean, mean[k].mean_estimate().z_score(0.0));
    worst_var = std::max(worst_var, second[k].mean_estimate().z_score(g.step(k)));
  }
  CHECK(worst_mean < 5.0);
  CHECK(worst_var < 5.0);
  CHECK(cross.mean_estimate().z_score(0.0) < 5.0);
}

TEST_CASE("batched map returns results in batch order independent of thread count") {
  const TimeGrid g = make_grid(1.0, 8, GridKind::Uniform);
  const auto firsts = map_path_batches(g, 1000, 5, 64, [](const BrownianEnsemble& w) { return w.first_path(); });
  REQUIRE(firsts.size() == 16);
  for (std::size_t b = 0; b < firsts.size(); ++b) CHECK(firsts[b] == b * 64);
  CHECK_THROWS_AS(map_path_batches(g, 10, 5, 4,
                                   [](const BrownianEnsemble& w) -> int {
                                     if (w.first_path() == 4) fail(ErrorKind::DegenerateInput, "boom");
                                     return 0;
                                   }),
                  Error);
}

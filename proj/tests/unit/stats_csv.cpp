#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "itolab/csv.hpp"
#include "itolab/grid.hpp"
#include "itolab/process.hpp"
#include "itolab/stats.hpp"

using namespace itolab;

TEST_CASE("moments and estimates") {
  Moments m;
  for (double x : {1.0, 2.0, 3.0, 4.0}) m.add(x);
  CHECK(m.count() == 4);
  CHECK(m.mean() == 2.5);
  CHECK(m.variance() == Catch::Approx(5.0 / 3.0));
  const Estimate e = m.mean_estimate();
  CHECK(e.value == 2.5);
  CHECK(e.se == Catch::Approx(std::sqrt(5.0 / 3.0 / 4.0)));
  CHECK(e.z_score(2.5) == 0.0);
  CHECK(Estimate{1.0, 0.0}.z_score(1.0) == 0.0);
  CHECK(std::isinf(Estimate{1.0, 0.0}.z_score(2.0)));

  Moments a, b;
  const std::vector<double> xs{1.0, 2.0, 3.0, 4.0};
  a.add(std::span<const double>(xs).first(2));
  b.add(std::span<const double>(xs).last(2));
  a.merge(b);
  CHECK(a.mean() == m.mean());
  CHECK(a.count() == 4);
}

TEST_CASE("variance, covariance, batch means and line fit") {
  const std::vector<double> xs{1.0, 3.0, 5.0, 7.0};
  CHECK(variance_estimate(xs).value == Catch::Approx(20.0 / 3.0));
  CHECK(mean_estimate(xs).value == 4.0);
  const std::vector<double> ys{2.0, 6.0, 10.0, 14.0};
  CHECK(covariance_estimate(xs, ys).value == Catch::Approx(40.0 / 3.0));
  CHECK(batch_means(xs).value == 4.0);
  const LineFit fit = fit_line(xs, ys);
  CHECK(fit.slope == Catch::Approx(2.0));
  CHECK(fit.intercept == Catch::Approx(0.0).margin(1e-12));
  CHECK(fit.r_squared == Catch::Approx(1.0));
}

TEST_CASE("csv formatting round-trips doubles") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
  CsvTable t({"a", "b", "c"});
  t.row({1.5, 2LL, std::string("x")});
  CHECK(t.str() == "a,b,c\n1.5,2,x\n");
  CHECK(t.size() == 1);
  CHECK_THROWS(t.row({1.0}));
}

TEST_CASE("grid and ensemble layouts") {
  const TimeGrid g = make_grid(1.0, 2, GridKind::Uniform);
  CHECK(grid_csv(g) == "t_0,t_1,t_2\n0,0.5,1\n");
  PathMatrix v(3, 2);
  v.at(1, 0) = 1.0;
  v.at(2, 1) = -2.0;
  CHECK(ensemble_csv(g, v) == "t_0,t_1,t_2\n0,1,0\n0,0,-2\n");
}

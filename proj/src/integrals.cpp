#include "itolab/integrals.hpp"

#include "itolab/error.hpp"
#include "itolab/simd/kernels.hpp"

namespace itolab {

namespace {

void check_integrand(const ProcessSample& zeta, const BrownianEnsemble& w) {
  require_same_shape(zeta, w);
  require(zeta.adapted, ErrorKind::AdaptednessViolation,
          "Ito integrand is not flagged as adapted");
}

}  // namespace

PartialIntegralProcess ito_integral(const ProcessSample& zeta, const BrownianEnsemble& w) {
  check_integrand(zeta, w);
  const std::size_t cells = w.grid().cells();
  PartialIntegralProcess out = ProcessSample::zeros(w.grid(), w.path_count(), w.first_path());
  for (std::size_t k = 0; k < cells; ++k) {
    auto next = out.values.row(k + 1);
    simd::scale(next, out.values.row(k), 1.0);
    simd::add_product(next, zeta.values.row(k), w.increment(k));
  }
  return out;
}

std::vector<double> ito_terminal(const ProcessSample& zeta, const BrownianEnsemble& w) {
  check_integrand(zeta, w);
  std::vector<double> acc(w.path_count(), 0.0);
  for (std::size_t k = 0; k < w.grid().cells(); ++k) {
    simd::add_product(acc, zeta.values.row(k), w.increment(k));
  }
  return acc;
}

std::vector<double> lebesgue_integral(const ProcessSample& u, std::size_t up_to) {
  require(up_to <= u.grid.cells(), ErrorKind::InvalidArgument,
          "Lebesgue integral upper node beyond the grid");
  std::vector<double> acc(u.path_count(), 0.0);
  for (std::size_t j = 0; j < up_to; ++j) simd::add_scaled(acc, u.values.row(j), u.grid.step(j));
  return acc;
}

}  // namespace itolab

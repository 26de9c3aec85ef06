#include "itolab/clark_ocone.hpp"

#include <cmath>

#include <json.hpp>

#include "itolab/batch.hpp"
#include "itolab/error.hpp"
#include "itolab/integrals.hpp"

namespace itolab {

namespace {

// E[(w + sqrt(tau) Z)^i] with Z standard normal.
double shifted_gaussian_power(int i, double w, double tau) {
  double total = 0.0;
  double binom = 1.0;       // C(i, j)
  double double_fact = 1.0; // (j - 1)!!
  for (int j = 0; j <= i; ++j) {
    if (j > 0) binom = binom * (i - j + 1) / j;
    if (j % 2 == 0) {
      if (j >= 2) double_fact *= (j - 1);
      total += binom * std::pow(w, i - j) * std::pow(tau, j / 2) * double_fact;
    }
  }
  return total;
}

// d/dw of the above.
double shifted_gaussian_power_dw(int i, double w, double tau) {
  double total = 0.0;
  double binom = 1.0;
  double double_fact = 1.0;
  for (int j = 0; j <= i; ++j) {
    if (j > 0) binom = binom * (i - j + 1) / j;
    if (j % 2 == 0) {
      if (j >= 2) double_fact *= (j - 1);
      if (i - j >= 1) total += binom * (i - j) * std::pow(w, i - j - 1) * std::pow(tau, j / 2) * double_fact;
    }
  }
  return total;
}

}  // namespace

std::string to_string(ClaimTag tag) {
  switch (tag) {
    case ClaimTag::Constant: return "constant";
    case ClaimTag::Linear: return "linear";
    case ClaimTag::Square: return "square";
    case ClaimTag::Cube: return "cube";
    case ClaimTag::Geometric: return "geometric";
    case ClaimTag::Polynomial: return "polynomial";
  }
  return "unknown";
}

ClaimTag parse_claim_tag(const std::string& name) {
  for (ClaimTag t : {ClaimTag::Constant, ClaimTag::Linear, ClaimTag::Square, ClaimTag::Cube,
                     ClaimTag::Geometric, ClaimTag::Polynomial}) {
    if (to_string(t) == name) return t;
  }
  fail(ErrorKind::InvalidArgument, "unknown claim tag '" + name + "'");
}

ClaimSpec parse_claim(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::InvalidArgument, std::string("claim is not valid JSON: ") + e.what());
  }
  require(j.is_object() && j.contains("tag") && j["tag"].is_string(), ErrorKind::InvalidArgument,
          "claim needs a string \"tag\"");
  ClaimSpec spec;
  spec.tag = parse_claim_tag(j["tag"].get<std::string>());
  auto number = [&](const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    require(j[key].is_number(), ErrorKind::InvalidArgument, "claim parameter must be a number");
    return j[key].get<double>();
  };
  spec.value = number("value", 0.0);
  spec.sigma = number("sigma", 1.0);
  spec.scale = number("scale", 1.0);
  if (spec.tag == ClaimTag::Polynomial) {
    require(j.contains("coefficients") && j["coefficients"].is_array(), ErrorKind::InvalidArgument,
            "polynomial claim needs a \"coefficients\" array");
    for (const auto& c : j["coefficients"]) {
      require(c.is_number(), ErrorKind::InvalidArgument, "polynomial coefficients must be numbers");
      spec.coefficients.push_back(c.get<double>());
    }
  }
  return spec;
}

std::string claim_json(const ClaimSpec& spec) {
  nlohmann::ordered_json j;
  j["tag"] = to_string(spec.tag);
  if (spec.tag == ClaimTag::Constant) j["value"] = spec.value;
  if (spec.tag == ClaimTag::Geometric) j["sigma"] = spec.sigma;
  if (spec.tag == ClaimTag::Polynomial) j["coefficients"] = spec.coefficients;
  if (spec.scale != 1.0) j["scale"] = spec.scale;
  return j.dump();
}

double claim_payoff(const ClaimSpec& spec, double w, double h) {
  return claim_conditional_mean(spec, h, w, h);
}

double claim_conditional_mean(const ClaimSpec& spec, double t, double w, double h) {
  const double tau = h - t;
  double v = 0.0;
  switch (spec.tag) {
    case ClaimTag::Constant: v = spec.value; break;
    case ClaimTag::Linear: v = w; break;
    case ClaimTag::Square: v = w * w + tau; break;
    case ClaimTag::Cube: v = w * w * w + 3.0 * w * tau; break;
    case ClaimTag::Geometric: {
      const double s = spec.sigma;
      v = std::exp(s * w - 0.5 * s * s * t);
      break;
    }
    case ClaimTag::Polynomial:
      for (std::size_t i = 0; i < spec.coefficients.size(); ++i) {
        v += spec.coefficients[i] * shifted_gaussian_power(static_cast<int>(i), w, tau);
      }
      break;
  }
  return spec.scale * v;
}

double claim_integrand(const ClaimSpec& spec, double t, double w, double h) {
  const double tau = h - t;
  double v = 0.0;
  switch (spec.tag) {
    case ClaimTag::Constant: v = 0.0; break;
    case ClaimTag::Linear: v = 1.0; break;
    case ClaimTag::Square: v = 2.0 * w; break;
    case ClaimTag::Cube: v = 3.0 * w * w + 3.0 * tau; break;
    case ClaimTag::Geometric: {
      const double s = spec.sigma;
      v = s * std::exp(s * w - 0.5 * s * s * t);
      break;
    }
    case ClaimTag::Polynomial:
      for (std::size_t i = 1; i < spec.coefficients.size(); ++i) {
        v += spec.coefficients[i] * shifted_gaussian_power_dw(static_cast<int>(i), w, tau);
      }
      break;
  }
  return spec.scale * v;
}

double claim_mean(const ClaimSpec& spec, double h) {
  return claim_conditional_mean(spec, 0.0, 0.0, h);
}

bool claim_is_deterministic(const ClaimSpec& spec) {
  if (spec.scale == 0.0 || spec.tag == ClaimTag::Constant) return true;
  if (spec.tag == ClaimTag::Geometric) return spec.sigma == 0.0;
  if (spec.tag == ClaimTag::Polynomial) {
    for (std::size_t i = 1; i < spec.coefficients.size(); ++i) {
      if (spec.coefficients[i] != 0.0) return false;
    }
    return true;
  }
  return false;
}

ProcessSample claim_zeta(const ClaimSpec& spec, const BrownianEnsemble& w,
                         std::optional<std::size_t> horizon_node) {
  const TimeGrid& grid = w.grid();
  const std::size_t hk = horizon_node.value_or(grid.cells());
  require(hk <= grid.cells(), ErrorKind::InvalidArgument, "claim horizon beyond the grid");
  const double h = grid.node(hk);
  ProcessSample zeta = ProcessSample::zeros(grid, w.path_count(), w.first_path());
  for (std::size_t k = 0; k < hk; ++k) {
    const double t = grid.node(k);
    const auto wk = w.at_node(k);
    auto row = zeta.values.row(k);
    for (std::size_t m = 0; m < row.size(); ++m) row[m] = claim_integrand(spec, t, wk[m], h);
  }
  return zeta;
}

ClaimSample evaluate_claim(const ClaimSpec& spec, const BrownianEnsemble& w,
                           std::optional<std::size_t> horizon_node) {
  const std::size_t hk = horizon_node.value_or(w.grid().cells());
  ClaimSample out{{}, claim_zeta(spec, w, hk), 0.0, hk};
  const double h = w.grid().node(hk);
  const auto wh = w.at_node(hk);
  out.xi.resize(wh.size());
  for (std::size_t m = 0; m < wh.size(); ++m) {
    out.xi[m] = claim_payoff(spec, wh[m], h);
  }
  out.mean = claim_mean(spec, h);
  return out;
}

std::vector<ResidualPoint> representation_residual(const ClaimSpec& spec, double horizon,
                                                   const std::vector<std::size_t>& refinements,
                                                   std::size_t paths, std::uint64_t seed,
                                                   std::size_t batch_paths) {
  for (std::size_t i = 1; i < refinements.size(); ++i) {
    require(refinements[i] > refinements[i - 1], ErrorKind::InvalidArgument,
            "refinements must be increasing");
  }
  std::vector<ResidualPoint> out;
  for (std::size_t cells : refinements) {
    const TimeGrid grid = make_grid(horizon, cells, GridKind::Uniform);
    const auto parts = map_path_batches(grid, paths, seed, batch_paths, [&](const BrownianEnsemble& w) {
      const ClaimSample c = evaluate_claim(spec, w);
      const std::vector<double> ito = ito_terminal(c.zeta, w);
      Moments m;
      for (std::size_t i = 0; i < ito.size(); ++i) {
        const double r = c.xi[i] - c.mean - ito[i];
        m.add(r * r);
      }
      return m;
    });
    Moments total;
    for (const Moments& m : parts) total.merge(m);
    out.push_back({cells, total.mean_estimate()});
  }
  return out;
}

}  // namespace itolab

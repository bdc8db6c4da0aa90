#pragma once

// Realized drift and covariation of the pricing kernel over one short step,
// compared with -r pi and -lambda. Shared by the kernel tests and the
// acceptance suite.

#include <cmath>
#include <cstdint>
#include <vector>

#include "infokernel/information.hpp"
#include "infokernel/kernel.hpp"
#include "oracles.hpp"

namespace dynamics {

struct Comparison {
  double estimate = 0.0;
  double target = 0.0;
  double standard_error = 0.0;  // of estimate - target

  bool within(double relative = 0.02, double sigmas = 3.0) const {
    return std::fabs(estimate - target) <= std::max(sigmas * standard_error, relative * std::fabs(target));
  }
};

struct Report {
  Comparison drift;              // E[(d pi + sum lambda pi dW) / h] vs E[-r pi]
  std::vector<Comparison> vol;   // E[d log pi dW_k / h] vs E[-lambda_k]
};

/// Simulates xi on {0, t, t + h}. The bridge sampler is exact in law on any
/// grid, so intermediate points would not change the joint law at t and t + h.
inline Report check(const infokernel::MarketModel& model, double t, double h, std::size_t n_paths,
                    std::uint64_t seed) {
  using namespace infokernel;
  const auto factors = model.factors();
  const std::vector<FactorSpec> fs(factors.begin(), factors.end());
  const std::size_t n = fs.size();
  const std::vector<double> grid{0.0, t, t + h};
  const auto paths = simulate_paths(fs, grid, n_paths, seed);

  std::vector<double> drift_diff(n_paths), drift_target(n_paths);
  std::vector<std::vector<double>> vol_diff(n, std::vector<double>(n_paths));
  std::vector<std::vector<double>> vol_target(n, std::vector<double>(n_paths));

  for (std::size_t i = 0; i < n_paths; ++i) {
    const auto s0 = paths[i].state(1);
    const auto s1 = paths[i].state(2);
    const double pi0 = kernel_value(model, s0);
    const double pi1 = kernel_value(model, s1);
    const double r = short_rate(model, s0);
    const auto lambda = market_price_of_risk(model, s0);

    double correction = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double T = fs[k].release_time();
      const double e = filter_expectation(fs[k], t, s0.xi[k]);
      const double dw = (s1.xi[k] - s0.xi[k]) - h * (fs[k].sigma() * T * e - s0.xi[k]) / (T - t);
      correction += lambda[k] * pi0 * dw;
      vol_diff[k][i] = std::log(pi1 / pi0) * dw / h + lambda[k];
      vol_target[k][i] = -lambda[k];
    }
    drift_diff[i] = (pi1 - pi0 + correction) / h + r * pi0;
    drift_target[i] = -r * pi0;
  }

  Report rep;
  const auto dd = oracle::summarize(drift_diff);
  const auto dt = oracle::summarize(drift_target);
  rep.drift = {dt.mean + dd.mean, dt.mean, dd.standard_error};
  for (std::size_t k = 0; k < n; ++k) {
    const auto vd = oracle::summarize(vol_diff[k]);
    const auto vt = oracle::summarize(vol_target[k]);
    rep.vol.push_back({vt.mean + vd.mean, vt.mean, vd.standard_error});
  }
  return rep;
}

}  // namespace dynamics

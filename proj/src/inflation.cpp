#include "infokernel/inflation.hpp"

#include <cmath>
#include <string>

#include "infokernel/errors.hpp"

namespace infokernel {

namespace {
constexpr double kDriftTolerance = 1e-10;
}

double price_level(const MarketModel& model, const InformationState& state) {
  model.validate(state);
  const double g = model.real().value(state.t, state.xi);
  const double f = model.nominal().value(state.t, state.xi);
  if (!(g > 0.0) || !(f > 0.0)) throw NumericalError("kernel functions must be positive");
  return g / f;
}

BondQuote price_linker(const MarketModel& model, const InformationState& state, double T, const QuadratureRule& rule) {
  const KernelFunction& g = model.real();
  const double level = price_level(model, state);
  if (T == state.t) {
    // still validates the maturity against the first release
    (void)price_bond(model, state, T, rule);
    return {state.t, T, level, kernel_rate(model, state, KernelKind::real)};
  }
  const double f = model.nominal().value(state.t, state.xi);
  const double q = tilde_f(g, model, state, T, rule) / f;
  if (!(q > 0.0) || !std::isfinite(q)) throw NumericalError("linker price must be positive and finite");
  return {state.t, T, q, -std::log(q / level) / (T - state.t)};
}

RealRates real_rate_and_mpr(const MarketModel& model, const InformationState& state) {
  return {kernel_rate(model, state, KernelKind::real), market_price_of_risk(model, state, KernelKind::real)};
}

double price_level_drift_expanded(const MarketModel& model, const InformationState& state) {
  model.validate(state);
  const auto factors = model.factors();
  const double t = state.t;
  const KernelJet f = model.nominal().jet(t, state.xi);
  const KernelJet g = model.real().jet(t, state.xi);

  double nominal_part = -f.dt;
  double real_part = -g.dt;
  double filter_part = 0.0, cross = 0.0, square = 0.0;
  for (std::size_t k = 0; k < factors.size(); ++k) {
    const double T = factors[k].release_time();
    const double x = state.xi[k];
    nominal_part += x / (T - t) * f.gradient[k] - 0.5 * f.curvature[k];
    real_part += x / (T - t) * g.gradient[k] - 0.5 * g.curvature[k];
    const double filtered = filter_expectation(factors[k], t, x);
    filter_part += factors[k].sigma() * T / (T - t) * filtered * (g.gradient[k] / g.value - f.gradient[k] / f.value);
    cross += g.gradient[k] * f.gradient[k];
    square += f.gradient[k] * f.gradient[k];
  }
  return nominal_part / f.value - real_part / g.value + filter_part - cross / (g.value * f.value) +
         square / (f.value * f.value);
}

PriceLevelDynamics price_level_dynamics(const MarketModel& model, const InformationState& state) {
  const double r = kernel_rate(model, state, KernelKind::nominal);
  const auto real = real_rate_and_mpr(model, state);
  const auto lambda = market_price_of_risk(model, state, KernelKind::nominal);

  PriceLevelDynamics out;
  out.drift = r - real.rate;
  double scale = std::fabs(r) + std::fabs(real.rate);
  out.vol.resize(lambda.size());
  for (std::size_t k = 0; k < lambda.size(); ++k) {
    out.vol[k] = lambda[k] - real.market_price_of_risk[k];
    out.drift += lambda[k] * out.vol[k];
    scale += std::fabs(lambda[k] * out.vol[k]);
  }

  const double expanded = price_level_drift_expanded(model, state);
  if (std::fabs(expanded - out.drift) > kDriftTolerance * std::max(1.0, scale))
    throw ConsistencyError("inflation drift mismatch: compact " + std::to_string(out.drift) + " vs expanded " +
                           std::to_string(expanded));
  return out;
}

}  // namespace infokernel

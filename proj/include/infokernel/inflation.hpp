#pragma once

#include <vector>

#include "infokernel/bonds.hpp"

namespace infokernel {

/// Drift (the instantaneous inflation rate) and volatility of dC/C.
struct PriceLevelDynamics {
  double drift = 0.0;
  std::vector<double> vol;
};

/// C_t = g / f at the state.
double price_level(const MarketModel& model, const InformationState& state);

/// Inflation-linked discount bond paying C_T at T: g~(t, T, xi) / f(t, xi).
/// The quote's yield is the real yield -ln(Q / C_t)/(T - t), the real short rate at T == t.
BondQuote price_linker(const MarketModel& model, const InformationState& state, double T,
                       const QuadratureRule& rule = gauss_hermite(kDefaultQuadratureOrder));

struct RealRates {
  double rate = 0.0;
  std::vector<double> market_price_of_risk;
};

/// Real short rate and market price of risk from g. No sign restriction applies.
RealRates real_rate_and_mpr(const MarketModel& model, const InformationState& state);

/// Drift I_t = r - r^R + sum_k lambda^k (lambda^k - lambda^{R,k}) and vol lambda - lambda^R.
///
/// The drift is also evaluated term by term from f, g, their derivatives and
/// the filters; a relative disagreement above 1e-10 throws ConsistencyError.
PriceLevelDynamics price_level_dynamics(const MarketModel& model, const InformationState& state);

/// The term-by-term drift expression on its own (used for the cross-check).
double price_level_drift_expanded(const MarketModel& model, const InformationState& state);

}  // namespace infokernel

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "infokernel/kernel.hpp"
#include "infokernel/quadrature.hpp"

namespace infokernel {

/// Decomposition xi_{T,T_k} = shrink * xi_{t,T_k} + nu * Y with Y standard normal and
/// independent of xi_{t,T_k} under the bridge measure.
struct ProjectionCoefficients {
  double shrink = 1.0;  ///< (T_k - T)/(T_k - t)
  double nu = 0.0;      ///< sqrt((T - t)(T_k - T)/(T_k - t))
};

ProjectionCoefficients projection(double t, double T, double release_time);

struct BondQuote {
  double t = 0.0;
  double T = 0.0;
  double price = 1.0;
  /// Continuously compounded yield -ln(price)/(T - t); at T == t the short rate (its limit).
  double yield = 0.0;
};

/// Function of the information values at the horizon date.
using InformationPayoff = std::function<double(std::span<const double>)>;

/// E^B[h(xi_T) | xi_t] for the bridge-measure law of the information values at T.
/// Requires t <= T < T_1. Tensor Gauss-Hermite for up to four active
/// factors, randomized quasi-Monte Carlo beyond.
GaussianExpectation bridge_expectation(const MarketModel& model, const InformationState& state, double T,
                                       const InformationPayoff& h, const QuadratureRule& rule);

/// f~(t, T, xi) = E^B[f(T, xi_T) | xi_t = xi].
double tilde_f(const KernelFunction& f, const MarketModel& model, const InformationState& state, double T,
               const QuadratureRule& rule);

/// Nominal discount bond P_tT = f~(t, T, xi) / f(t, xi).
BondQuote price_bond(const MarketModel& model, const InformationState& state, double T,
                     const QuadratureRule& rule = gauss_hermite(kDefaultQuadratureOrder));

/// Gaussian-completion closed form of price_bond for ExponentialSum kernels.
/// Works for either kernel kind; the denominator is always the nominal kernel.
BondQuote price_bond_closed_form(const MarketModel& model, const InformationState& state, double T,
                                 KernelKind numerator = KernelKind::nominal);

struct MonteCarloEstimate {
  double value = 0.0;
  double standard_error = 0.0;
  std::size_t paths = 0;
};

/// E^P[pi_T | F_t] / pi_t by simulation under the physical measure.
///
/// X is drawn from the posterior at (t, xi_t) and each bridge is continued
/// from its current value, so any state (not only t = 0) can be used.
MonteCarloEstimate mc_price_bond(const MarketModel& model, const InformationState& state, double T,
                                 std::size_t n_paths, std::uint64_t seed, KernelKind numerator = KernelKind::nominal);

/// Bond quotes for nondecreasing maturities; every maturity must precede T_1.
std::vector<BondQuote> yield_curve(const MarketModel& model, const InformationState& state,
                                   std::span<const double> maturities,
                                   const QuadratureRule& rule = gauss_hermite(kDefaultQuadratureOrder));

/// Value at t of the payoff G(T, xi_T) paid at T: E^B[f(T, .) G(T, .)] / f(t, xi).
double price_information_derivative(const MarketModel& model, const InformationState& state, double T,
                                    const std::function<double(double, std::span<const double>)>& payoff,
                                    const QuadratureRule& rule = gauss_hermite(kDefaultQuadratureOrder));

/// Claim paying H(X_1, ..., X_n) at the release horizon, priced as an
/// information derivative maturing at T* = (1 - clamp) T_1 whose payoff is
/// E[H(X) | xi_{T*}] under the product of factor posteriors.
double price_terminal_claim(const MarketModel& model, const InformationState& state,
                            const std::function<double(std::span<const double>)>& claim, double clamp,
                            const QuadratureRule& rule = gauss_hermite(kDefaultQuadratureOrder));

}  // namespace infokernel

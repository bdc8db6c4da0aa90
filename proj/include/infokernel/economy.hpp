#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "infokernel/bonds.hpp"

namespace infokernel {

/// Log-utility monetary economy U(x, y) = a ln x + b ln y.
///
/// Consumption k, money supply m and the liquidity benefit rate eta are
/// positive functions of (t, xi). The multiplier `lagrange` is an input; it
/// scales both kernels through a_t = a Gamma(t)/lagrange and b_t = b Gamma(t)/lagrange.
class EconomySpec {
 public:
  using Discount = std::function<double(double)>;

  EconomySpec(std::vector<FactorSpec> factors, Discount gamma, double a, double b, double lagrange,
              KernelFunction consumption, KernelFunction money_supply, KernelFunction liquidity_benefit,
              double horizon_delta = MarketModel::kDefaultHorizonDelta);

  /// Gamma(t) = exp(-rate * t).
  static Discount exponential_discount(double rate);

  std::span<const FactorSpec> factors() const { return factors_; }
  double a() const { return a_; }
  double b() const { return b_; }
  double lagrange() const { return lagrange_; }
  double gamma(double t) const;
  double a_t(double t) const { return a_ * gamma(t) / lagrange_; }
  double b_t(double t) const { return b_ * gamma(t) / lagrange_; }
  const KernelFunction& consumption() const { return consumption_; }
  const KernelFunction& money_supply() const { return money_supply_; }
  const KernelFunction& liquidity_benefit() const { return liquidity_benefit_; }

  /// Non-fatal findings from construction (e.g. an increasing discount function).
  const std::vector<std::string>& warnings() const { return warnings_; }

  /// Market model whose f and g reproduce the economy kernels once multiplied by the M-product.
  const MarketModel& induced_model() const { return induced_; }

 private:
  std::vector<FactorSpec> factors_;
  Discount gamma_;
  double a_, b_, lagrange_;
  KernelFunction consumption_, money_supply_, liquidity_benefit_;
  std::vector<std::string> warnings_;
  MarketModel induced_;
};

/// U_x > 0, U_xx < 0, U_y > 0, U_yy < 0 and U_xx U_yy > U_xy^2 at the given points.
bool sidrauski_conditions_hold(double a, double b, std::span<const std::pair<double, double>> points);

struct EconomyKernels {
  double nominal = 0.0;  ///< a_t / (eta_t m_t)
  double real = 0.0;     ///< b_t / k_t
};

EconomyKernels economy_kernels(const EconomySpec& spec, const InformationState& state);

/// C_t = (b/a) eta_t m_t / k_t.
double economy_price_level(const EconomySpec& spec, const InformationState& state);

/// Real liquidity benefit j_t = eta_t m_t / C_t.
double real_liquidity_benefit(const EconomySpec& spec, const InformationState& state);

/// Induced (f, g) pair; equal to the kernels held by induced_model().
std::pair<KernelFunction, KernelFunction> induced_kernel_functions(const EconomySpec& spec);

struct EconomyBondPrices {
  BondQuote nominal;
  BondQuote linker;
};

/// Nominal and inflation-linked bonds from the economy primitives directly:
/// M_t eta_t m_t / a_t times the Gaussian integral of a_T / (M_T eta_T m_T)
/// (resp. b_T / (M_T k_T)) over the projected information values.
EconomyBondPrices economy_bond_prices(const EconomySpec& spec, const InformationState& state, double T,
                                      const QuadratureRule& rule = gauss_hermite(kDefaultQuadratureOrder));

struct BudgetReport {
  double h0 = 0.0;
  double standard_error = 0.0;
  std::size_t paths = 0;
};

/// H_0 = E[int_0^T_end pi_t C_t (j_t + k_t) dt], trapezoid in time along simulated paths.
BudgetReport evaluate_budget(const EconomySpec& spec, double horizon, std::size_t n_paths, std::uint64_t seed,
                             double grid_step = 1.0 / 64.0);

}  // namespace infokernel

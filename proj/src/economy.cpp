#include "infokernel/economy.hpp"

#include <array>
#include <cmath>
#include <string>

#include "infokernel/errors.hpp"
#include "infokernel/parallel.hpp"

namespace infokernel {

namespace {

double positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw DomainError(std::string(what) + " must be positive and finite");
  return v;
}

KernelFunction make_induced(std::vector<FactorSpec> factors, EconomySpec::Discount gamma, double weight,
                            double lagrange, KernelFunction first, std::optional<KernelFunction> second) {
  const std::size_t n = factors.size();
  return KernelFunction::custom(
      n, [factors = std::move(factors), gamma = std::move(gamma), weight, lagrange, first = std::move(first),
          second = std::move(second)](double t, std::span<const double> xi) {
        double denom = density_martingale_product(factors, InformationState{t, {xi.begin(), xi.end()}});
        denom *= first.value(t, xi);
        if (second) denom *= second->value(t, xi);
        return weight * gamma(t) / lagrange / denom;
      });
}

const std::array<std::pair<double, double>, 9> kUtilitySamples{{{0.1, 0.1},
                                                                 {0.1, 1.0},
                                                                 {0.1, 10.0},
                                                                 {1.0, 0.1},
                                                                 {1.0, 1.0},
                                                                 {1.0, 10.0},
                                                                 {10.0, 0.1},
                                                                 {10.0, 1.0},
                                                                 {10.0, 10.0}}};

}  // namespace

bool sidrauski_conditions_hold(double a, double b, std::span<const std::pair<double, double>> points) {
  for (const auto& [x, y] : points) {
    if (!(x > 0.0) || !(y > 0.0)) return false;
    const double ux = a / x, uxx = -a / (x * x);
    const double uy = b / y, uyy = -b / (y * y);
    const double uxy = 0.0;
    if (!(ux > 0.0 && uxx < 0.0 && uy > 0.0 && uyy < 0.0 && uxx * uyy > uxy * uxy)) return false;
  }
  return true;
}

EconomySpec::Discount EconomySpec::exponential_discount(double rate) {
  return [rate](double t) { return std::exp(-rate * t); };
}

EconomySpec::EconomySpec(std::vector<FactorSpec> factors, Discount gamma, double a, double b, double lagrange,
                         KernelFunction consumption, KernelFunction money_supply, KernelFunction liquidity_benefit,
                         double horizon_delta)
    : factors_(std::move(factors)),
      gamma_(std::move(gamma)),
      a_(a),
      b_(b),
      lagrange_(lagrange),
      consumption_(std::move(consumption)),
      money_supply_(std::move(money_supply)),
      liquidity_benefit_(std::move(liquidity_benefit)),
      induced_(factors_.empty() ? throw ConfigError("economy needs at least one factor") : factors_,
               make_induced(factors_, gamma_, a_, lagrange_, liquidity_benefit_, money_supply_),
               make_induced(factors_, gamma_, b_, lagrange_, consumption_, std::nullopt), horizon_delta) {
  if (!gamma_) throw ConfigError("economy needs a discount function");
  if (!(a_ > 0.0) || !(b_ > 0.0)) throw ConfigError("utility weights a and b must be positive");
  if (!(lagrange_ > 0.0)) throw ConfigError("Lagrange multiplier must be positive");
  for (const KernelFunction* fn : {&consumption_, &money_supply_, &liquidity_benefit_})
    if (fn->arity() != factors_.size()) throw ConfigError("economy function arity differs from factor count");
  if (!sidrauski_conditions_hold(a_, b_, kUtilitySamples))
    throw ConfigError("log utility violates the Sidrauski conditions");

  const double horizon = factors_.front().release_time();
  constexpr int kSteps = 256;
  double previous = gamma_(0.0);
  for (int i = 1; i <= kSteps; ++i) {
    const double v = gamma_(horizon * i / kSteps);
    if (!(v > 0.0)) throw ConfigError("discount function must be positive");
    if (v > previous * (1.0 + 1e-12)) {
      warnings_.push_back("discount function increases before the first release time");
      break;
    }
    previous = v;
  }
}

double EconomySpec::gamma(double t) const { return positive(gamma_(t), "discount function"); }

EconomyKernels economy_kernels(const EconomySpec& spec, const InformationState& state) {
  spec.induced_model().validate(state);
  const double eta = positive(spec.liquidity_benefit().value(state.t, state.xi), "liquidity benefit rate");
  const double m = positive(spec.money_supply().value(state.t, state.xi), "money supply");
  const double k = positive(spec.consumption().value(state.t, state.xi), "consumption rate");
  return {spec.a_t(state.t) / (eta * m), spec.b_t(state.t) / k};
}

double economy_price_level(const EconomySpec& spec, const InformationState& state) {
  spec.induced_model().validate(state);
  const double eta = positive(spec.liquidity_benefit().value(state.t, state.xi), "liquidity benefit rate");
  const double m = positive(spec.money_supply().value(state.t, state.xi), "money supply");
  const double k = positive(spec.consumption().value(state.t, state.xi), "consumption rate");
  return spec.b() / spec.a() * eta * m / k;
}

double real_liquidity_benefit(const EconomySpec& spec, const InformationState& state) {
  const double eta = spec.liquidity_benefit().value(state.t, state.xi);
  const double m = spec.money_supply().value(state.t, state.xi);
  return eta * m / economy_price_level(spec, state);
}

std::pair<KernelFunction, KernelFunction> induced_kernel_functions(const EconomySpec& spec) {
  return {spec.induced_model().nominal(), spec.induced_model().real()};
}

EconomyBondPrices economy_bond_prices(const EconomySpec& spec, const InformationState& state, double T,
                                      const QuadratureRule& rule) {
  const MarketModel& model = spec.induced_model();
  model.validate(state);
  const auto factors = spec.factors();
  if (!(T >= state.t) || !(T < factors.front().release_time()))
    throw DomainError("economy bond maturity must lie in [t, T_1)");

  const double m_t = density_martingale_product(factors, state);
  const double eta_t = positive(spec.liquidity_benefit().value(state.t, state.xi), "liquidity benefit rate");
  const double money_t = positive(spec.money_supply().value(state.t, state.xi), "money supply");
  const double prefactor = m_t * eta_t * money_t / spec.a_t(state.t);
  const double level = economy_price_level(spec, state);

  if (T == state.t) {
    return {{state.t, T, 1.0, kernel_rate(model, state, KernelKind::nominal)},
            {state.t, T, level, kernel_rate(model, state, KernelKind::real)}};
  }

  std::vector<double> means(factors.size()), stdevs(factors.size());
  for (std::size_t k = 0; k < factors.size(); ++k) {
    const auto p = projection(state.t, T, factors[k].release_time());
    means[k] = p.shrink * state.xi[k];
    stdevs[k] = p.nu;
  }
  const double a_T = spec.a_t(T), b_T = spec.b_t(T);
  auto m_T = [&](std::span<const double> z) {
    return density_martingale_product(factors, InformationState{T, {z.begin(), z.end()}});
  };
  const auto nominal = expect_gaussian_nd(
      [&](std::span<const double> z) {
        return a_T / (m_T(z) * spec.liquidity_benefit().value(T, z) * spec.money_supply().value(T, z));
      },
      means, stdevs, rule);
  const auto linker = expect_gaussian_nd(
      [&](std::span<const double> z) { return b_T / (m_T(z) * spec.consumption().value(T, z)); }, means, stdevs,
      rule);

  const double p = prefactor * nominal.value;
  const double q = prefactor * linker.value;
  if (!(p > 0.0) || !(q > 0.0)) throw NumericalError("economy bond prices must be positive");
  const double tau = T - state.t;
  return {{state.t, T, p, -std::log(p) / tau}, {state.t, T, q, -std::log(q / level) / tau}};
}

BudgetReport evaluate_budget(const EconomySpec& spec, double horizon, std::size_t n_paths, std::uint64_t seed,
                             double grid_step) {
  const MarketModel& model = spec.induced_model();
  if (!(horizon > 0.0) || !(horizon < model.max_time()))
    throw DomainError("budget horizon must lie in (0, T_max)");
  if (!(grid_step > 0.0)) throw ConfigError("budget grid step must be positive");
  if (n_paths == 0) throw ConfigError("budget evaluation needs at least one path");

  const auto steps = static_cast<std::size_t>(std::ceil(horizon / grid_step - 1e-12));
  std::vector<double> grid(steps + 1);
  for (std::size_t i = 0; i <= steps; ++i) grid[i] = i == steps ? horizon : static_cast<double>(i) * grid_step;

  const auto factors = spec.factors();
  std::vector<double> totals(n_paths);
  parallel_for(n_paths, 256, [&](std::size_t begin, std::size_t end) {
    for (std::size_t p = begin; p < end; ++p) {
      const auto path = simulate_path(factors, grid, seed, p);
      double integral = 0.0, previous = 0.0;
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto state = path.state(i);
        const auto kernels = economy_kernels(spec, state);
        const double level = economy_price_level(spec, state);
        const double j = real_liquidity_benefit(spec, state);
        const double k = spec.consumption().value(state.t, state.xi);
        const double integrand = kernels.nominal * level * (j + k);
        if (i > 0) integral += 0.5 * (grid[i] - grid[i - 1]) * (integrand + previous);
        previous = integrand;
      }
      totals[p] = integral;
    }
  });

  double mean = 0.0;
  for (double v : totals) mean += v;
  mean /= static_cast<double>(n_paths);
  double var = 0.0;
  for (double v : totals) var += (v - mean) * (v - mean);
  var = n_paths > 1 ? var / static_cast<double>(n_paths - 1) : 0.0;
  return {mean, std::sqrt(var / static_cast<double>(n_paths)), n_paths};
}

}  // namespace infokernel

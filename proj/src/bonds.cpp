#include "infokernel/bonds.hpp"

#include <cmath>
#include <string>

#include "infokernel/errors.hpp"
#include "infokernel/parallel.hpp"
#include "infokernel/random.hpp"

namespace infokernel {

namespace {

void require_maturity(const MarketModel& model, const InformationState& state, double T) {
  model.validate(state);
  if (!std::isfinite(T) || T < state.t) throw DomainError("maturity precedes the valuation time");
  const double first_release = model.factors().front().release_time();
  if (!(T < first_release))
    throw DomainError("maturity " + std::to_string(T) + " is not before the first release time " +
                      std::to_string(first_release));
}

double positive_or_throw(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw NumericalError(std::string(what) + " must be positive and finite");
  return v;
}

}  // namespace

ProjectionCoefficients projection(double t, double T, double release_time) {
  if (!(t <= T) || !(T <= release_time) || !(t < release_time) || t < 0.0)
    throw DomainError("projection requires 0 <= t <= T <= T_k with t < T_k");
  const double span = release_time - t;
  const double remaining = release_time - T;
  return {remaining / span, std::sqrt((T - t) * remaining / span)};
}

GaussianExpectation bridge_expectation(const MarketModel& model, const InformationState& state, double T,
                                       const InformationPayoff& h, const QuadratureRule& rule) {
  require_maturity(model, state, T);
  const auto factors = model.factors();
  std::vector<double> means(factors.size()), stdevs(factors.size());
  for (std::size_t k = 0; k < factors.size(); ++k) {
    const auto p = projection(state.t, T, factors[k].release_time());
    means[k] = p.shrink * state.xi[k];
    stdevs[k] = p.nu;
  }
  return expect_gaussian_nd(h, means, stdevs, rule);
}

double tilde_f(const KernelFunction& f, const MarketModel& model, const InformationState& state, double T,
               const QuadratureRule& rule) {
  return bridge_expectation(model, state, T, [&](std::span<const double> xi) { return f.value(T, xi); }, rule).value;
}

BondQuote price_bond(const MarketModel& model, const InformationState& state, double T, const QuadratureRule& rule) {
  require_maturity(model, state, T);
  if (T == state.t) return {state.t, T, 1.0, short_rate(model, state)};
  const double denom = positive_or_throw(model.nominal().value(state.t, state.xi), "kernel function");
  const double price = positive_or_throw(tilde_f(model.nominal(), model, state, T, rule) / denom, "bond price");
  return {state.t, T, price, -std::log(price) / (T - state.t)};
}

BondQuote price_bond_closed_form(const MarketModel& model, const InformationState& state, double T,
                                 KernelKind numerator) {
  require_maturity(model, state, T);
  const auto* terms = model.kernel(numerator).exponential_terms();
  if (terms == nullptr) throw ConfigError("closed-form bond price needs an exponential-sum kernel");
  const auto factors = model.factors();
  std::vector<ProjectionCoefficients> proj;
  std::vector<double> nu_sq;
  for (const auto& f : factors) {
    proj.push_back(projection(state.t, T, f.release_time()));
    nu_sq.push_back((T - state.t) * (f.release_time() - T) / (f.release_time() - state.t));
  }

  double num = 0.0;
  for (const auto& term : *terms) {
    double e = -term.rho * T;
    for (std::size_t k = 0; k < factors.size(); ++k)
      e += term.a[k] * proj[k].shrink * state.xi[k] + 0.5 * term.a[k] * term.a[k] * nu_sq[k];
    num += term.c * std::exp(e);
  }
  const double denom = positive_or_throw(model.nominal().value(state.t, state.xi), "kernel function");
  const double price = positive_or_throw(num / denom, "bond price");
  const double yield = T > state.t ? -std::log(price) / (T - state.t) : kernel_rate(model, state, numerator);
  return {state.t, T, price, yield};
}

MonteCarloEstimate mc_price_bond(const MarketModel& model, const InformationState& state, double T,
                                 std::size_t n_paths, std::uint64_t seed, KernelKind numerator) {
  require_maturity(model, state, T);
  if (n_paths == 0) throw ConfigError("Monte Carlo pricing needs at least one path");
  const auto factors = model.factors();
  const std::size_t n = factors.size();
  const double t = state.t;
  const KernelFunction& kernel = model.kernel(numerator);

  std::vector<PriorDistribution> posteriors;
  posteriors.reserve(n);
  for (std::size_t k = 0; k < n; ++k) posteriors.push_back(posterior_density(factors[k], t, state.xi[k]));

  const double pi_t = kernel_value(model, state, KernelKind::nominal);
  if (!(pi_t > 0.0)) throw NumericalError("pricing kernel underflows at the valuation state");

  std::vector<double> ratios(n_paths);
  parallel_for(n_paths, 1024, [&](std::size_t begin, std::size_t end) {
    InformationState later{T, std::vector<double>(n)};
    for (std::size_t i = begin; i < end; ++i) {
      StreamRng rng(seed, i);
      for (std::size_t k = 0; k < n; ++k) {
        const double x = posteriors[k].sample(rng);
        const double sigma = factors[k].sigma();
        const auto p = projection(t, T, factors[k].release_time());
        const double bridge_t = state.xi[k] - sigma * t * x;
        later.xi[k] = sigma * T * x + p.shrink * bridge_t + p.nu * rng.normal();
      }
      const double pi_T = density_martingale_product(factors, later) * kernel.value(T, later.xi);
      ratios[i] = pi_T / pi_t;
    }
  });

  double mean = 0.0;
  for (double r : ratios) mean += r;
  mean /= static_cast<double>(n_paths);
  double var = 0.0;
  for (double r : ratios) var += (r - mean) * (r - mean);
  var = n_paths > 1 ? var / static_cast<double>(n_paths - 1) : 0.0;
  return {mean, std::sqrt(var / static_cast<double>(n_paths)), n_paths};
}

std::vector<BondQuote> yield_curve(const MarketModel& model, const InformationState& state,
                                   std::span<const double> maturities, const QuadratureRule& rule) {
  for (std::size_t i = 1; i < maturities.size(); ++i)
    if (maturities[i] < maturities[i - 1]) throw DomainError("yield curve maturities must be sorted");
  std::vector<BondQuote> out;
  out.reserve(maturities.size());
  for (double T : maturities) out.push_back(price_bond(model, state, T, rule));
  return out;
}

double price_information_derivative(const MarketModel& model, const InformationState& state, double T,
                                    const std::function<double(double, std::span<const double>)>& payoff,
                                    const QuadratureRule& rule) {
  require_maturity(model, state, T);
  const double denom = positive_or_throw(model.nominal().value(state.t, state.xi), "kernel function");
  const auto e = bridge_expectation(
      model, state, T,
      [&](std::span<const double> xi) {
        const double g = payoff(T, xi);
        if (!std::isfinite(g)) throw NumericalError("information derivative payoff is not finite at a node");
        return model.nominal().value(T, xi) * g;
      },
      rule);
  return e.value / denom;
}

double price_terminal_claim(const MarketModel& model, const InformationState& state,
                            const std::function<double(std::span<const double>)>& claim, double clamp,
                            const QuadratureRule& rule) {
  if (!(clamp > 0.0) || !(clamp < 1.0)) throw DomainError("terminal claim clamp must lie in (0, 1)");
  const auto factors = model.factors();
  const double horizon = (1.0 - clamp) * factors.front().release_time();
  if (!(horizon < factors.front().release_time()))
    throw DomainError("terminal claim clamp too small to separate the horizon from the release time");
  if (!(state.t < horizon)) throw DomainError("valuation time must precede the clamped horizon");
  const std::size_t n = factors.size();

  auto conditional_claim = [&](double T, std::span<const double> xi) {
    // E[H(X) | xi_T] under the product of independent factor posteriors
    std::vector<std::vector<WeightedPoint>> atoms(n);
    for (std::size_t k = 0; k < n; ++k) atoms[k] = posterior_density(factors[k], T, xi[k]).atoms(rule);
    std::vector<std::size_t> idx(n, 0);
    std::vector<double> x(n);
    double total = 0.0;
    for (;;) {
      double w = 1.0;
      for (std::size_t k = 0; k < n; ++k) {
        x[k] = atoms[k][idx[k]].x;
        w *= atoms[k][idx[k]].w;
      }
      if (w > 0.0) total += w * claim(x);
      std::size_t k = 0;
      while (k < n && ++idx[k] == atoms[k].size()) idx[k++] = 0;
      if (k == n) break;
    }
    return total;
  };

  return price_information_derivative(model, state, horizon, conditional_claim, rule);
}

}  // namespace infokernel

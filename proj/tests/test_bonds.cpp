#include <cmath>
#include <random>

#include "doctest.h"
#include "infokernel/bonds.hpp"
#include "infokernel/errors.hpp"
#include "models.hpp"
#include "oracles.hpp"

using namespace infokernel;

namespace {

PriorDistribution coin() { return PriorDistribution::discrete({{0.0, 0.5}, {1.0, 0.5}}); }

KernelFunction exp_kernel(double rho, std::vector<double> a, double c = 1.0) {
  return KernelFunction::exponential_sum({ExponentialTerm{c, rho, std::move(a)}});
}

MarketModel one_factor(KernelFunction f, double U = 2.0, PriorDistribution prior = coin()) {
  return MarketModel({FactorSpec(1.0, U, std::move(prior))}, std::move(f));
}

}  // namespace

TEST_CASE("projection") {
  const auto same = projection(0.3, 0.3, 2.0);
  CHECK(same.shrink == 1.0);
  CHECK(same.nu == 0.0);
  const auto end = projection(0.3, 2.0, 2.0);
  CHECK(end.shrink == 0.0);
  CHECK(end.nu == 0.0);
  const auto mid = projection(0.0, 1.0, 2.0);
  CHECK(mid.shrink == 0.5);
  CHECK(mid.nu == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
  CHECK(mid.nu == doctest::Approx(0.707107).epsilon(1e-6));
  CHECK_THROWS_AS(projection(1.0, 0.5, 2.0), DomainError);
  CHECK_THROWS_AS(projection(0.0, 2.5, 2.0), DomainError);
}

TEST_CASE("projection reproduces the bridge law and Y is independent of xi_t") {
  // with X = 0 the information process is the bridge itself
  const std::vector<FactorSpec> factors{FactorSpec(1.0, 2.0, PriorDistribution::discrete({{0.0, 1.0}}))};
  const double t = 0.6, T = 1.3;
  const std::vector<double> grid{0.0, t, T};
  const std::size_t n = 100000;
  const auto paths = simulate_paths(factors, grid, n, 404);
  const auto p = projection(t, T, 2.0);
  std::vector<double> y(n), y2(n), cov(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double xt = paths[i].value(1, 0);
    y[i] = (paths[i].value(2, 0) - p.shrink * xt) / p.nu;
    y2[i] = y[i] * y[i];
    cov[i] = y[i] * xt;
  }
  const auto m = oracle::summarize(y);
  const auto v = oracle::summarize(y2);
  const auto c = oracle::summarize(cov);
  CHECK(std::fabs(m.mean) < 3.0 * m.standard_error);
  CHECK(std::fabs(v.mean - 1.0) < 3.0 * v.standard_error);
  CHECK(std::fabs(c.mean) < 3.0 * c.standard_error);
}

TEST_CASE("tilde_f examples") {
  const auto rule = gauss_hermite(64);
  const auto flat = one_factor(KernelFunction::constant(2.5, 1));
  CHECK(tilde_f(flat.nominal(), flat, {0.0, {0.0}}, 1.0, rule) == doctest::Approx(2.5).epsilon(1e-14));
  const auto decay = one_factor(exp_kernel(0.02, {0.0}));
  CHECK(tilde_f(decay.nominal(), decay, {0.3, {0.7}}, 1.5, rule) ==
        doctest::Approx(std::exp(-0.03)).epsilon(1e-14));
  const auto linear = one_factor(exp_kernel(0.0, {1.0}));
  CHECK(tilde_f(linear.nominal(), linear, {0.0, {0.0}}, 1.0, rule) == doctest::Approx(std::exp(0.25)).epsilon(1e-13));
  CHECK(tilde_f(linear.nominal(), linear, {0.0, {0.0}}, 1.0, rule) == doctest::Approx(1.284025).epsilon(1e-6));
  CHECK_THROWS_AS(tilde_f(linear.nominal(), linear, {0.0, {0.0}}, 2.0, rule), DomainError);
}

TEST_CASE("price_bond examples") {
  const auto flat = one_factor(exp_kernel(0.02, {0.0}), 10.0);
  CHECK(price_bond(flat, {0.0, {0.0}}, 5.0).price == doctest::Approx(std::exp(-0.1)).epsilon(1e-14));
  CHECK(price_bond(flat, {0.0, {0.0}}, 5.0).price == doctest::Approx(0.904837).epsilon(1e-6));
  CHECK(price_bond(flat, {0.0, {0.0}}, 5.0).yield == doctest::Approx(0.02).epsilon(1e-12));
  const auto at = price_bond(flat, {1.0, {0.3}}, 1.0);
  CHECK(at.price == 1.0);
  CHECK(at.yield == doctest::Approx(0.02).epsilon(1e-12));

  const auto linear = one_factor(exp_kernel(0.0, {1.0}));
  CHECK(price_bond(linear, {0.0, {0.0}}, 1.0).price == doctest::Approx(std::exp(0.25)).epsilon(1e-13));
  CHECK(price_bond_closed_form(linear, {0.0, {0.0}}, 1.0).price == std::exp(0.25));
  CHECK(price_bond_closed_form(flat, {0.0, {0.0}}, 5.0).price == std::exp(-0.1));
  CHECK(price_bond_closed_form(flat, {0.5, {0.0}}, 0.5).price == 1.0);

  CHECK_THROWS_AS(price_bond(linear, {0.5, {0.0}}, 0.4), DomainError);
  const auto custom = one_factor(KernelFunction::custom(1, [](double, std::span<const double>) { return 1.0; }));
  CHECK_THROWS_AS(price_bond_closed_form(custom, {0.0, {0.0}}, 1.0), ConfigError);
}

TEST_CASE("quadrature agrees with the closed form on random models") {
  std::mt19937_64 gen(2718);
  for (int i = 0; i < 40; ++i) {
    const auto s = models::random_scenario(gen);
    const double q = price_bond(s.model, s.state, s.maturity).price;
    const double c = price_bond_closed_form(s.model, s.state, s.maturity).price;
    CHECK(std::fabs(q - c) <= 1e-10 * c);
  }
}

TEST_CASE("P_tt = 1 and monotone maturity") {
  std::mt19937_64 gen(99);
  for (int i = 0; i < 20; ++i) {
    const auto s = models::random_scenario(gen);
    CHECK(std::fabs(price_bond(s.model, s.state, s.state.t).price - 1.0) <= 1e-12);
    CHECK(std::fabs(price_bond_closed_form(s.model, s.state, s.state.t).price - 1.0) <= 1e-12);
  }
  const auto flat = one_factor(exp_kernel(0.02, {0.0}), 10.0);
  double previous = 1.0;
  for (double T = 0.5; T < 9.9; T += 0.5) {
    const double p = price_bond(flat, {0.0, {0.0}}, T).price;
    CHECK(p < previous);
    previous = p;
  }
}

TEST_CASE("factor reduction") {
  const auto f1 = KernelFunction::exponential_sum({{1.0, 0.02, {0.3}}, {0.5, 0.05, {-0.6}}});
  const auto f2 = KernelFunction::exponential_sum({{1.0, 0.02, {0.3, 0.0}}, {0.5, 0.05, {-0.6, 0.0}}});
  const MarketModel one({FactorSpec(1.0, 2.0, coin())}, f1);
  const MarketModel two({FactorSpec(1.0, 2.0, coin()), FactorSpec(0.7, 3.0, PriorDistribution::gaussian(0, 1))}, f2);
  for (double T : {0.5, 1.0, 1.7}) {
    const double a = price_bond(one, {0.3, {0.4}}, T).price;
    const double b = price_bond(two, {0.3, {0.4, -1.1}}, T).price;
    CHECK(std::fabs(a - b) <= 1e-12);
  }
}

TEST_CASE("mc_price_bond") {
  const auto flat = one_factor(KernelFunction::constant(1.0, 1), 1.0);
  const auto unit = mc_price_bond(flat, {0.0, {0.0}}, 0.9, 20000, 3);
  CHECK(std::fabs(unit.value - 1.0) < 3.0 * unit.standard_error);

  const auto decay = one_factor(exp_kernel(0.02, {0.0}), 2.0);
  const auto d = mc_price_bond(decay, {0.0, {0.0}}, 1.0, 20000, 4);
  CHECK(std::fabs(d.value - std::exp(-0.02)) < 3.0 * d.standard_error + 1e-15);

  const auto linear = one_factor(exp_kernel(0.02, {0.1}), 2.0);
  const auto l = mc_price_bond(linear, {0.0, {0.0}}, 1.0, 200000, 5);
  CHECK(l.paths == 200000);
  CHECK(std::fabs(l.value - price_bond_closed_form(linear, {0.0, {0.0}}, 1.0).price) < 3.0 * l.standard_error);

  // interior state
  const auto scenarios = models::battery();
  for (std::size_t i : {3u, 8u}) {
    const auto& s = scenarios[i];
    const auto mc = mc_price_bond(s.model, s.state, s.maturity, 50000, 11 + i);
    CHECK(std::fabs(mc.value - price_bond(s.model, s.state, s.maturity).price) < 3.0 * mc.standard_error);
  }

  const auto again = mc_price_bond(linear, {0.0, {0.0}}, 1.0, 1000, 5);
  CHECK(again.value == mc_price_bond(linear, {0.0, {0.0}}, 1.0, 1000, 5).value);
  CHECK_THROWS_AS(mc_price_bond(linear, {0.0, {0.0}}, 1.0, 0, 5), ConfigError);
}

TEST_CASE("yield_curve") {
  const auto flat = one_factor(exp_kernel(0.02, {0.0}), 10.0);
  const std::vector<double> maturities{0.0, 1.0, 2.0, 5.0};
  for (const auto& q : yield_curve(flat, {0.0, {0.0}}, maturities)) CHECK(q.yield == doctest::Approx(0.02).epsilon(1e-12));
  CHECK(yield_curve(flat, {0.0, {0.0}}, std::vector<double>{}).empty());

  const auto linear = one_factor(exp_kernel(0.02, {0.3}));
  const std::vector<double> single{1.2};
  CHECK(yield_curve(linear, {0.1, {0.2}}, single)[0].price == price_bond(linear, {0.1, {0.2}}, 1.2).price);
  const std::vector<double> unsorted{1.0, 0.5};
  CHECK_THROWS_AS(yield_curve(linear, {0.0, {0.0}}, unsorted), DomainError);
  const std::vector<double> too_long{1.0, 2.0};
  CHECK_THROWS_AS(yield_curve(linear, {0.0, {0.0}}, too_long), DomainError);
}

TEST_CASE("price_information_derivative") {
  const auto linear = one_factor(exp_kernel(0.02, {0.3}));
  const InformationState s{0.2, {0.4}};
  CHECK(price_information_derivative(linear, s, 1.3, [](double, std::span<const double>) { return 1.0; }) ==
        doctest::Approx(price_bond(linear, s, 1.3).price).epsilon(1e-14));

  const auto unit = one_factor(KernelFunction::constant(1.0, 1));
  CHECK(std::fabs(price_information_derivative(unit, {0.0, {0.0}}, 1.0,
                                               [](double, std::span<const double> x) { return x[0]; })) <= 1e-14);
  CHECK(price_information_derivative(unit, {0.0, {0.0}}, 1.0,
                                     [](double, std::span<const double> x) { return x[0] * x[0]; }) ==
        doctest::Approx(0.5).epsilon(1e-13));
  CHECK_THROWS_AS(price_information_derivative(unit, {0.0, {0.0}}, 1.0,
                                               [](double, std::span<const double>) { return std::nan(""); }),
                  NumericalError);
}

TEST_CASE("price_terminal_claim") {
  const auto unit_claim = [](std::span<const double>) { return 1.0; };
  const auto identity = [](std::span<const double> x) { return x[0]; };

  const auto linear = one_factor(exp_kernel(0.02, {0.3}));
  const double clamp = 1e-3;
  CHECK(price_terminal_claim(linear, {0.1, {0.2}}, unit_claim, clamp) ==
        doctest::Approx(price_bond(linear, {0.1, {0.2}}, (1.0 - clamp) * 2.0).price).epsilon(1e-12));

  const auto certain = one_factor(KernelFunction::constant(1.0, 1), 1.0, PriorDistribution::discrete({{0.0, 1.0}}));
  CHECK(price_terminal_claim(certain, {0.0, {0.0}}, identity, 1e-4) == 0.0);

  CHECK_THROWS_AS(price_terminal_claim(linear, {0.1, {0.2}}, identity, 0.0), DomainError);
  CHECK_THROWS_AS(price_terminal_claim(linear, {1.999, {0.2}}, identity, 0.01), DomainError);
}

TEST_CASE("terminal claim matches a physical-measure Monte Carlo oracle") {
  // E^P[pi_T* G(xi_T*)] / pi_0 with G the posterior mean, for f = 1 and a two-point prior
  const auto unit = one_factor(KernelFunction::constant(1.0, 1), 1.0);
  const std::vector<FactorSpec> factors(unit.factors().begin(), unit.factors().end());
  for (double clamp : {3e-1, 1e-1}) {
    const double horizon = 1.0 - clamp;
    const std::vector<double> grid{0.0, horizon};
    const auto paths = simulate_paths(factors, grid, 100000, 808);
    std::vector<double> v;
    for (const auto& p : paths) {
      const double xi = p.value(1, 0);
      v.push_back(density_martingale(factors[0], horizon, xi) * filter_expectation(factors[0], horizon, xi));
    }
    const auto s = oracle::summarize(v);
    const double price = price_terminal_claim(unit, {0.0, {0.0}}, [](std::span<const double> x) { return x[0]; }, clamp);
    CHECK(std::fabs(price - s.mean) < 3.0 * s.standard_error);
  }
}

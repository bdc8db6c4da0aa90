#include <cmath>

#include "doctest.h"
#include "infokernel/errors.hpp"
#include "infokernel/information.hpp"
#include "oracles.hpp"

using namespace infokernel;

namespace {

FactorSpec two_point(double sigma = 1.0, double T = 1.0) {
  return FactorSpec(sigma, T, PriorDistribution::discrete({{0.0, 0.5}, {1.0, 0.5}}));
}

FactorSpec standard_gaussian(double sigma = 1.0, double T = 1.0) {
  return FactorSpec(sigma, T, PriorDistribution::gaussian(0.0, 1.0));
}

FactorSpec mixture(double sigma = 1.0, double T = 1.0) {
  return FactorSpec(sigma, T, PriorDistribution::gaussian_mixture({{-1.0, 0.5, 0.4}, {1.5, 0.8, 0.6}}));
}

FactorSpec tabulated(double sigma = 1.0, double T = 1.0) {
  std::vector<double> x, d;
  for (int i = 0; i <= 400; ++i) {
    const double v = -4.0 + 0.02 * i;
    x.push_back(v);
    d.push_back(oracle::normal_pdf(v, 0.2, 0.9));
  }
  return FactorSpec(sigma, T, PriorDistribution::tabulated(x, d));
}

}  // namespace

TEST_CASE("factor validation") {
  CHECK_THROWS_AS(FactorSpec(0.0, 1.0, PriorDistribution::gaussian(0, 1)), ConfigError);
  CHECK_THROWS_AS(FactorSpec(1.0, -1.0, PriorDistribution::gaussian(0, 1)), ConfigError);
}

TEST_CASE("filter_expectation examples") {
  // kappa = 2, exponent for x = 1 is kappa (sigma xi - sigma^2 t / 2) = 0.3
  CHECK(filter_expectation(two_point(), 0.5, 0.4) == doctest::Approx(1.0 / (1.0 + std::exp(-0.3))).epsilon(1e-14));
  CHECK(filter_expectation(two_point(), 0.5, 0.4) == doctest::Approx(0.574443).epsilon(1e-6));

  // Gaussian completion: kappa sigma xi / (1 + kappa sigma^2 t) = 0.8 / 2
  CHECK(filter_expectation(standard_gaussian(), 0.5, 0.4) == doctest::Approx(0.4).epsilon(1e-14));
  const auto brute = oracle::brute_posterior([](double x) { return oracle::normal_pdf(x, 0, 1); }, 1.0, 1.0, 0.5, 0.4);
  CHECK(std::fabs(filter_expectation(standard_gaussian(), 0.5, 0.4) - brute.mean) < 1e-10);
}

TEST_CASE("filter at t = 0 is the prior mean for every family") {
  for (const auto& f : {two_point(), standard_gaussian(), mixture(), tabulated()}) {
    CHECK(filter_expectation(f, 0.0, 0.0) == f.prior().mean());
    CHECK(density_martingale(f, 0.0, 0.0) == 1.0);
  }
}

TEST_CASE("filter and martingale against brute-force Bayes") {
  const double sigma = 0.8, T = 2.0;
  struct Case {
    FactorSpec factor;
    std::function<double(double)> density;
  };
  const std::vector<Case> cases{
      {mixture(sigma, T),
       [](double x) { return 0.4 * oracle::normal_pdf(x, -1.0, 0.5) + 0.6 * oracle::normal_pdf(x, 1.5, 0.8); }},
      {standard_gaussian(sigma, T), [](double x) { return oracle::normal_pdf(x, 0, 1); }},
  };
  for (const auto& c : cases) {
    for (double t : {0.3, 1.0, 1.7}) {
      for (double xi : {-0.7, 0.0, 0.9, 2.1}) {
        const auto brute = oracle::brute_posterior(c.density, sigma, T, t, xi);
        CHECK(std::fabs(filter_expectation(c.factor, t, xi) - brute.mean) < 1e-9);
        CHECK(density_martingale(c.factor, t, xi) == doctest::Approx(1.0 / brute.normalizer).epsilon(1e-9));
        CHECK(posterior_density(c.factor, t, xi).variance() == doctest::Approx(brute.variance).epsilon(1e-8));
      }
    }
  }
}

TEST_CASE("posterior_density examples") {
  const auto post = posterior_density(two_point(), 0.5, 0.4);
  const auto& d = std::get<DiscretePrior>(post.variant());
  const double p1 = 1.0 / (1.0 + std::exp(-0.3));
  CHECK(d.points[0].w == doctest::Approx(1.0 - p1).epsilon(1e-14));
  CHECK(d.points[1].w == doctest::Approx(p1).epsilon(1e-14));

  CHECK(posterior_density(two_point(), 0.0, 0.0) == two_point().prior());
  CHECK(posterior_density(standard_gaussian(), 0.5, 0.4).variance() == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(std::holds_alternative<GaussianMixturePrior>(posterior_density(mixture(), 0.5, 0.1).variant()));
  CHECK(std::holds_alternative<TabulatedPrior>(posterior_density(tabulated(), 0.5, 0.1).variant()));
}

TEST_CASE("posterior mean equals filter expectation") {
  for (const auto& f : {two_point(), standard_gaussian(), mixture(), tabulated()})
    for (double t : {0.1, 0.5, 0.9})
      for (double xi : {-1.0, 0.2, 1.3})
        CHECK(std::fabs(posterior_density(f, t, xi).mean() - filter_expectation(f, t, xi)) <= 1e-12);
}

TEST_CASE("density_martingale examples and domain") {
  CHECK(density_martingale(two_point(), 0.5, 0.4) == doctest::Approx(2.0 / (1.0 + std::exp(0.3))).epsilon(1e-14));
  CHECK(density_martingale(two_point(), 0.5, 0.4) == doctest::Approx(0.851115).epsilon(1e-6));
  CHECK_THROWS_AS(density_martingale(two_point(), 1.0, 0.0), DomainError);
  CHECK_THROWS_AS(filter_expectation(two_point(), 1.5, 0.0), DomainError);
  CHECK_THROWS_AS(filter_expectation(two_point(), -0.1, 0.0), DomainError);
}

TEST_CASE("Markov-functional consistency of M along a path") {
  const std::vector<FactorSpec> factors{mixture(1.2, 1.0)};
  std::vector<double> grid;
  for (int i = 0; i <= 50; ++i) grid.push_back(0.018 * i);
  for (std::uint64_t p = 0; p < 20; ++p) {
    const auto path = simulate_path(factors, grid, 11, p);
    double product = 1.0;
    for (std::size_t i = 1; i < grid.size(); ++i) {
      product *= density_martingale(factors[0], grid[i], path.value(i, 0)) /
                 density_martingale(factors[0], grid[i - 1], path.value(i - 1, 0));
    }
    CHECK(product == doctest::Approx(density_martingale(factors[0], grid.back(), path.value(grid.size() - 1, 0)))
                         .epsilon(1e-8));
  }
}

TEST_CASE("simulate_paths basics") {
  const std::vector<FactorSpec> factors{two_point(1.0, 1.0)};
  const std::vector<double> zero{0.0};
  const auto paths = simulate_paths(factors, zero, 3, 5);
  for (const auto& p : paths) CHECK(p.value(0, 0) == 0.0);

  const std::vector<double> bad{0.0, 1.5};
  CHECK_THROWS_AS(simulate_paths(factors, bad, 1, 5), DomainError);
  const std::vector<double> unsorted{0.5, 0.2};
  CHECK_THROWS_AS(simulate_paths(factors, unsorted, 1, 5), DomainError);

  // deterministic per (seed, index)
  const std::vector<double> grid{0.0, 0.3, 0.6};
  const auto a = simulate_paths(factors, grid, 4, 99);
  const auto b = simulate_paths(factors, grid, 4, 99);
  for (std::size_t i = 0; i < 4; ++i) CHECK(a[i].values == b[i].values);
}

TEST_CASE("to-release paths pin to sigma T X") {
  const std::vector<FactorSpec> factors{mixture(0.7, 1.0), two_point(1.3, 2.0)};
  const std::vector<double> grid{0.0, 0.25, 0.5, 0.75, 1.0};
  for (std::uint64_t i = 0; i < 50; ++i) {
    const auto path = simulate_path(factors, grid, 3, i);
    CHECK(std::fabs(path.value(4, 0) - 0.7 * 1.0 * path.x_draws[0]) <= 1e-12);
  }
}

TEST_CASE("bridge marginal variance and covariance") {
  // X = 0 so xi is the bridge itself
  const std::vector<FactorSpec> factors{FactorSpec(1.0, 1.0, PriorDistribution::discrete({{0.0, 1.0}}))};
  const std::vector<double> grid{0.0, 0.25, 0.5};
  const std::size_t n = 100000;
  const auto paths = simulate_paths(factors, grid, n, 2024);
  std::vector<double> sq(n), cross(n);
  for (std::size_t i = 0; i < n; ++i) {
    sq[i] = paths[i].value(2, 0) * paths[i].value(2, 0);
    cross[i] = paths[i].value(1, 0) * paths[i].value(2, 0);
  }
  const auto v = oracle::summarize(sq);
  const auto c = oracle::summarize(cross);
  CHECK(std::fabs(v.mean - 0.25) < 3.0 * v.standard_error);   // t(U - t)/U
  CHECK(std::fabs(c.mean - 0.125) < 3.0 * c.standard_error);  // s(U - t)/U
}

TEST_CASE("martingale and tower properties under P") {
  const std::size_t n = 100000;
  for (const auto& factor : {two_point(), standard_gaussian(), mixture(), tabulated()}) {
    const std::vector<FactorSpec> factors{factor};
    const std::vector<double> grid{0.0, 0.75};
    const auto paths = simulate_paths(factors, grid, n, 77);
    std::vector<double> m(n), filt(n);
    for (std::size_t i = 0; i < n; ++i) {
      m[i] = density_martingale(factor, 0.75, paths[i].value(1, 0));
      filt[i] = filter_expectation(factor, 0.75, paths[i].value(1, 0));
    }
    const auto ms = oracle::summarize(m);
    const auto fs = oracle::summarize(filt);
    // eight simultaneous checks, so a 4-sigma band
    CHECK(std::fabs(ms.mean - 1.0) < 4.0 * ms.standard_error);
    CHECK(std::fabs(fs.mean - factor.prior().mean()) < 4.0 * fs.standard_error);
  }
}

TEST_CASE("innovation process") {
  const auto factor = two_point();
  const std::vector<FactorSpec> factors{factor};

  const std::vector<double> single{0.0};
  const auto p0 = simulate_path(factors, single, 1, 0);
  CHECK(innovation_increments(factor, p0, 0) == std::vector<double>{0.0});

  std::vector<double> grid;
  for (int i = 0; i <= 256; ++i) grid.push_back(i / 512.0);
  const std::size_t n = 100000;
  std::vector<double> w_half(n), first_increment(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto path = simulate_path(factors, grid, 31, i);
    const auto w = innovation_increments(factor, path, 0);
    w_half[i] = w.back() * w.back();
    first_increment[i] = w[1] - w[0];
  }
  const auto var = oracle::summarize(w_half);
  CHECK(std::fabs(var.mean - 0.5) < std::max(3.0 * var.standard_error, 0.02 * 0.5));
  const auto inc = oracle::summarize(first_increment);
  CHECK(std::fabs(inc.mean) < 3.0 * inc.standard_error);

  const std::vector<double> to_release{0.0, 0.5, 1.0};
  const auto p1 = simulate_path(factors, to_release, 1, 0);
  CHECK_THROWS_AS(innovation_increments(factor, p1, 0), DomainError);
}

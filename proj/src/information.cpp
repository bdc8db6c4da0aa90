#include "infokernel/information.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "infokernel/errors.hpp"
#include "infokernel/parallel.hpp"
#include "infokernel/random.hpp"

namespace infokernel {

namespace {

void require_open_horizon(const FactorSpec& factor, double t) {
  if (!(t >= 0.0) || !(t < factor.release_time()))
    throw DomainError("information state time " + std::to_string(t) + " outside [0, " +
                      std::to_string(factor.release_time()) + ")");
}

// Bayes reweighting exp(kappa * (sigma x xi - sigma^2 x^2 t / 2)), kappa = T / (T - t).
ExponentialTilt bridge_tilt(const FactorSpec& factor, double t, double xi) {
  require_open_horizon(factor, t);
  if (!std::isfinite(xi)) throw NumericalError("information value is not finite");
  const double T = factor.release_time();
  const double s = factor.sigma();
  const double kappa = T / (T - t);
  return factor.prior().tilt(kappa * s * xi, kappa * s * s * t);
}

void validate_grid(std::span<const FactorSpec> factors, std::span<const double> grid) {
  if (factors.empty()) throw ConfigError("at least one factor required");
  double horizon = factors[0].release_time();
  for (const auto& f : factors) horizon = std::min(horizon, f.release_time());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] >= 0.0)) throw DomainError("time grid must start at or after 0");
    if (grid[i] > horizon) throw DomainError("time grid exceeds the earliest release time");
    if (i > 0 && !(grid[i] > grid[i - 1])) throw DomainError("time grid must be strictly increasing");
  }
}

}  // namespace

FactorSpec::FactorSpec(double sigma, double release_time, PriorDistribution prior)
    : sigma_(sigma), release_time_(release_time), prior_(std::move(prior)) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ConfigError("factor sigma must be positive");
  if (!(release_time > 0.0) || !std::isfinite(release_time))
    throw ConfigError("factor release time must be positive");
}

InformationState InformationPath::state(std::size_t step) const {
  InformationState s{times.at(step), {}};
  s.xi.assign(values.begin() + static_cast<std::ptrdiff_t>(step * factor_count()),
              values.begin() + static_cast<std::ptrdiff_t>((step + 1) * factor_count()));
  return s;
}

InformationPath simulate_path(std::span<const FactorSpec> factors, std::span<const double> grid,
                              std::uint64_t seed, std::uint64_t index) {
  const std::size_t n = factors.size();
  InformationPath path;
  path.times.assign(grid.begin(), grid.end());
  path.values.assign(grid.size() * n, 0.0);
  path.x_draws.resize(n);
  path.seed = seed;
  path.index = index;

  StreamRng rng(seed, index);
  for (std::size_t k = 0; k < n; ++k) path.x_draws[k] = factors[k].prior().sample(rng);

  for (std::size_t k = 0; k < n; ++k) {
    const double T = factors[k].release_time();
    const double sx = factors[k].sigma() * path.x_draws[k];
    double s = 0.0, bridge = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double t = grid[i];
      // beta_t | beta_s ~ N(beta_s (T - t)/(T - s), (t - s)(T - t)/(T - s))
      const double z = rng.normal();
      if (t > s) {
        const double mean = bridge * (T - t) / (T - s);
        const double var = (t - s) * (T - t) / (T - s);
        bridge = mean + std::sqrt(std::max(0.0, var)) * z;
        s = t;
      }
      if (t == T) bridge = 0.0;
      path.values[i * n + k] = sx * t + bridge;
    }
  }
  return path;
}

std::vector<InformationPath> simulate_paths(std::span<const FactorSpec> factors, std::span<const double> grid,
                                            std::size_t n_paths, std::uint64_t seed) {
  validate_grid(factors, grid);
  std::vector<InformationPath> paths(n_paths);
  parallel_for(n_paths, 256, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) paths[i] = simulate_path(factors, grid, seed, i);
  });
  return paths;
}

PriorDistribution posterior_density(const FactorSpec& factor, double t, double xi) {
  return bridge_tilt(factor, t, xi).posterior;
}

double filter_expectation(const FactorSpec& factor, double t, double xi) {
  if (t == 0.0) return factor.prior().mean();
  return posterior_density(factor, t, xi).mean();
}

double log_density_martingale(const FactorSpec& factor, double t, double xi) {
  if (t == 0.0 && xi == 0.0) {
    require_open_horizon(factor, t);
    return 0.0;
  }
  return -bridge_tilt(factor, t, xi).log_normalizer;
}

double density_martingale(const FactorSpec& factor, double t, double xi) {
  const double m = std::exp(log_density_martingale(factor, t, xi));
  // may underflow to zero far in the tails; only overflow is an error
  if (!std::isfinite(m)) throw NumericalError("density martingale overflowed");
  return m;
}

double density_martingale_product(std::span<const FactorSpec> factors, const InformationState& state) {
  if (state.xi.size() != factors.size())
    throw ConfigError("information state has " + std::to_string(state.xi.size()) + " values for " +
                      std::to_string(factors.size()) + " factors");
  double log_m = 0.0;
  for (std::size_t k = 0; k < factors.size(); ++k) log_m += log_density_martingale(factors[k], state.t, state.xi[k]);
  const double m = std::exp(log_m);
  if (!std::isfinite(m)) throw NumericalError("density martingale product overflowed");
  return m;
}

std::vector<double> innovation_path(const FactorSpec& factor, std::span<const double> times,
                                    std::span<const double> xi) {
  if (times.size() != xi.size()) throw ConfigError("innovation path: times and values differ in length");
  std::vector<double> w(times.size(), 0.0);
  const double T = factor.release_time();
  const double sT = factor.sigma() * T;
  for (std::size_t j = 0; j + 1 < times.size(); ++j) {
    const double t = times[j];
    require_open_horizon(factor, t);
    const double h = times[j + 1] - t;
    if (!(h > 0.0)) throw DomainError("innovation path: times must be strictly increasing");
    const double drift = (sT * filter_expectation(factor, t, xi[j]) - xi[j]) / (T - t);
    w[j + 1] = w[j] + (xi[j + 1] - xi[j]) - drift * h;
  }
  if (!times.empty()) require_open_horizon(factor, times.back());
  return w;
}

std::vector<double> innovation_increments(const FactorSpec& factor, const InformationPath& path,
                                          std::size_t factor_index) {
  const std::size_t n = path.factor_count();
  if (factor_index >= n) throw ConfigError("innovation path: factor index out of range");
  std::vector<double> xi(path.times.size());
  for (std::size_t i = 0; i < xi.size(); ++i) xi[i] = path.values[i * n + factor_index];
  return innovation_path(factor, path.times, xi);
}

}  // namespace infokernel

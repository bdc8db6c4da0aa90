#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "infokernel/prior.hpp"

namespace infokernel {

/// One market factor X revealed at `release_time`, observed through
/// xi_t = sigma * t * X + beta_t with beta a Brownian bridge pinned at 0 and release_time.
class FactorSpec {
 public:
  FactorSpec(double sigma, double release_time, PriorDistribution prior);

  double sigma() const { return sigma_; }
  double release_time() const { return release_time_; }
  const PriorDistribution& prior() const { return prior_; }

  bool operator==(const FactorSpec&) const = default;

 private:
  double sigma_;
  double release_time_;
  PriorDistribution prior_;
};

/// Time together with the current value of every information process.
struct InformationState {
  double t = 0.0;
  std::vector<double> xi;
};

/// Simulated information paths for a set of factors on a common time grid.
struct InformationPath {
  std::vector<double> times;
  std::vector<double> values;  ///< row-major, times.size() x factor count
  std::vector<double> x_draws;
  std::uint64_t seed = 0;
  std::uint64_t index = 0;

  std::size_t factor_count() const { return x_draws.size(); }
  double value(std::size_t step, std::size_t factor) const { return values[step * factor_count() + factor]; }
  InformationState state(std::size_t step) const;
};

/// Simulates one path. X is drawn from each prior and the bridge is sampled
/// exactly in law at the grid times by sequential Gaussian conditioning.
/// The random stream depends only on (seed, index).
InformationPath simulate_path(std::span<const FactorSpec> factors, std::span<const double> grid,
                              std::uint64_t seed, std::uint64_t index);

/// Simulates `n_paths` independent paths; path i uses stream (seed, i).
/// Throws DomainError if the grid leaves [0, min release time] or is not increasing.
std::vector<InformationPath> simulate_paths(std::span<const FactorSpec> factors, std::span<const double> grid,
                                            std::size_t n_paths, std::uint64_t seed);

/// Posterior law of X given xi_t = xi.
PriorDistribution posterior_density(const FactorSpec& factor, double t, double xi);

/// E[X | xi_t = xi].
double filter_expectation(const FactorSpec& factor, double t, double xi);

/// Change-of-measure density martingale M_t as a function of (t, xi_t).
/// Underflows to 0 far in the tails close to the release time.
double density_martingale(const FactorSpec& factor, double t, double xi);

/// log M_t; finite even where density_martingale underflows.
double log_density_martingale(const FactorSpec& factor, double t, double xi);

/// Product of the density martingales of all factors at the state.
double density_martingale_product(std::span<const FactorSpec> factors, const InformationState& state);

/// Innovation Brownian motion of one factor along a path, reconstructed with
/// left-endpoint sums of its drift integrals. Returns one value per grid time, W(times[0]) = 0.
std::vector<double> innovation_path(const FactorSpec& factor, std::span<const double> times,
                                    std::span<const double> xi);

/// Convenience overload reading column `factor_index` of a simulated path.
std::vector<double> innovation_increments(const FactorSpec& factor, const InformationPath& path,
                                          std::size_t factor_index);

}  // namespace infokernel

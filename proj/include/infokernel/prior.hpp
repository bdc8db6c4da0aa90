#pragma once

#include <functional>
#include <variant>
#include <vector>

#include "infokernel/quadrature.hpp"

namespace infokernel {

class StreamRng;

struct WeightedPoint {
  double x = 0.0;
  double w = 0.0;
  bool operator==(const WeightedPoint&) const = default;
};

struct MixtureComponent {
  double mean = 0.0;
  double stdev = 1.0;
  double w = 1.0;
  bool operator==(const MixtureComponent&) const = default;
};

struct DiscretePrior {
  std::vector<WeightedPoint> points;
  bool operator==(const DiscretePrior&) const = default;
};

struct GaussianMixturePrior {
  std::vector<MixtureComponent> components;
  bool operator==(const GaussianMixturePrior&) const = default;
};

/// Density tabulated on an increasing grid, linear between grid points.
struct TabulatedPrior {
  std::vector<double> x;
  std::vector<double> density;
  bool operator==(const TabulatedPrior&) const = default;
};

struct ExponentialTilt;

/// Law of an X-factor.
///
/// Weights are validated (nonnegative, sum within 1e-9 of one) and then
/// normalized exactly. Tabulated densities are renormalized under the
/// trapezoid rule; a table whose integral is off by more than 1e-3 is rejected.
class PriorDistribution {
 public:
  using Variant = std::variant<DiscretePrior, GaussianMixturePrior, TabulatedPrior>;

  static PriorDistribution discrete(std::vector<WeightedPoint> points);
  static PriorDistribution gaussian(double mean, double stdev);
  static PriorDistribution gaussian_mixture(std::vector<MixtureComponent> components);
  static PriorDistribution tabulated(std::vector<double> x, std::vector<double> density);

  const Variant& variant() const { return law_; }

  double mean() const;
  double variance() const;

  /// E[h(X)] on the native support: exact sums for discrete laws, Gauss-Hermite
  /// per mixture component, trapezoid on the grid for tabulated densities.
  double expectation(const std::function<double(double)>& h,
                     const QuadratureRule& rule = gauss_hermite(kDefaultQuadratureOrder)) const;

  /// The law as a finite list of weighted atoms, using the same rules as expectation().
  std::vector<WeightedPoint> atoms(const QuadratureRule& rule) const;

  /// Reweights the law by exp(linear*x - quadratic*x^2/2).
  ///
  /// Returns the log of the normalizing integral together with the normalized
  /// reweighted law, which stays in the same family. Throws NumericalError if
  /// the integral diverges.
  ExponentialTilt tilt(double linear, double quadratic) const;

  double sample(StreamRng& rng) const;

  bool operator==(const PriorDistribution&) const = default;

 private:
  explicit PriorDistribution(Variant law) : law_(std::move(law)) {}
  Variant law_;
};

struct ExponentialTilt {
  double log_normalizer;
  PriorDistribution posterior;
};

double prior_mean(const PriorDistribution& p);

}  // namespace infokernel

#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace infokernel {

/// Gauss-Hermite rule for the weight e^{-x^2} (physicists' convention).
///
/// Nodes are stored in increasing order and are exactly symmetric about 0;
/// the weights sum to sqrt(pi).
class QuadratureRule {
 public:
  QuadratureRule(std::vector<double> nodes, std::vector<double> weights);

  std::size_t order() const { return nodes_.size(); }
  std::span<const double> nodes() const { return nodes_; }
  std::span<const double> weights() const { return weights_; }

  /// Integral of h(x) e^{-x^2} over the real line.
  double integrate(const std::function<double(double)>& h) const;

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

inline constexpr std::size_t kDefaultQuadratureOrder = 64;

/// Gauss-Hermite rule with `order` nodes; exact for polynomials of degree <= 2*order-1.
/// Rules are cached, so repeated calls are cheap. Throws ConfigError for order 0.
const QuadratureRule& gauss_hermite(std::size_t order);

/// E[h(mean + stdev * Z)] for a standard normal Z.
/// Returns h(mean) when stdev == 0. Throws NumericalError if h is non-finite at a node.
double expect_gaussian(const std::function<double(double)>& h, double mean, double stdev,
                       const QuadratureRule& rule);

/// Result of a multivariate Gaussian expectation; `standard_error` is zero for tensor rules.
struct GaussianExpectation {
  double value = 0.0;
  double standard_error = 0.0;
  std::size_t evaluations = 0;
};

/// Maximum number of tensor-product nodes before the per-dimension order is reduced.
inline constexpr std::size_t kMaxTensorNodes = 1'000'000;
/// Above this dimension the expectation switches to randomized quasi-Monte Carlo.
inline constexpr std::size_t kMaxTensorDimension = 4;

/// E[h(mean + stdev ⊙ Z)] for a standard normal vector Z of size means.size().
///
/// Dimensions with zero stdev are collapsed to a single node. Up to four active
/// dimensions use a full tensor product of `rule` (order reduced so that the
/// node count stays <= kMaxTensorNodes); beyond that, a randomized Halton
/// estimator with a reported standard error is used.
GaussianExpectation expect_gaussian_nd(const std::function<double(std::span<const double>)>& h,
                                       std::span<const double> means,
                                       std::span<const double> stdevs,
                                       const QuadratureRule& rule);

}  // namespace infokernel

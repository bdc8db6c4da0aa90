#include "infokernel/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>

#include <boost/math/special_functions/erf.hpp>

#include <Eigen/Eigenvalues>

#include "infokernel/errors.hpp"
#include "infokernel/parallel.hpp"
#include "infokernel/random.hpp"

namespace infokernel {

namespace {

// Newton iteration on the orthonormal Hermite recurrence, carried out in long
// double. Initial guesses follow the classical asymptotic estimates for the
// largest roots and extrapolate inward from previously found roots.
// Roots start from the eigenvalues of the Jacobi matrix (Golub-Welsch) and are
// polished by Newton steps on the orthonormal recurrence in long double, which
// also yields the weights.
QuadratureRule build_gauss_hermite(std::size_t n) {
  using real = long double;
  const real pim4 = 1.0L / std::pow(std::numbers::pi_v<real>, 0.25L);

  Eigen::VectorXd diag = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  Eigen::VectorXd sub(static_cast<Eigen::Index>(n > 1 ? n - 1 : 0));
  for (Eigen::Index j = 0; j < sub.size(); ++j) sub[j] = std::sqrt(0.5 * static_cast<double>(j + 1));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> jacobi;
  jacobi.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  if (jacobi.info() != Eigen::Success) throw NumericalError("Gauss-Hermite eigenvalue solve failed");

  const std::size_t half = (n + 1) / 2;
  std::vector<real> x(half), w(half);
  for (std::size_t i = 0; i < half; ++i) {
    // i-th largest root
    real z = std::fabs(static_cast<real>(jacobi.eigenvalues()[static_cast<Eigen::Index>(n - 1 - i)]));
    real pp = 0.0L;
    for (int iter = 0; iter < 100; ++iter) {
      real p1 = pim4, p2 = 0.0L;
      for (std::size_t j = 1; j <= n; ++j) {
        const real p3 = p2;
        p2 = p1;
        const real jj = static_cast<real>(j);
        p1 = z * std::sqrt(2.0L / jj) * p2 - std::sqrt((jj - 1.0L) / jj) * p3;
      }
      pp = std::sqrt(2.0L * static_cast<real>(n)) * p2;
      const real z1 = z;
      z = z1 - p1 / pp;
      if (std::fabs(z - z1) <= 1e-19L * std::max<real>(1.0L, std::fabs(z))) break;
    }
    x[i] = z;
    w[i] = 2.0L / (pp * pp);
  }

  std::vector<double> nodes(n), weights(n);
  for (std::size_t i = 0; i < half; ++i) {
    const double xi = static_cast<double>(x[i]);
    const double wi = static_cast<double>(w[i]);
    nodes[n - 1 - i] = xi;
    nodes[i] = -xi;
    weights[n - 1 - i] = wi;
    weights[i] = wi;
  }
  if (n % 2 == 1) nodes[n / 2] = 0.0;
  return QuadratureRule(std::move(nodes), std::move(weights));
}

double checked(double v) {
  if (!std::isfinite(v)) throw NumericalError("integrand is not finite at a quadrature node");
  return v;
}

}  // namespace

QuadratureRule::QuadratureRule(std::vector<double> nodes, std::vector<double> weights)
    : nodes_(std::move(nodes)), weights_(std::move(weights)) {
  if (nodes_.empty() || nodes_.size() != weights_.size())
    throw ConfigError("quadrature rule needs matching, non-empty node and weight lists");
}

double QuadratureRule::integrate(const std::function<double(double)>& h) const {
  double s = 0.0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) s += weights_[i] * checked(h(nodes_[i]));
  return s;
}

const QuadratureRule& gauss_hermite(std::size_t order) {
  if (order == 0) throw ConfigError("Gauss-Hermite order must be at least 1");
  static std::mutex mutex;
  static std::map<std::size_t, std::unique_ptr<QuadratureRule>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[order];
  if (!slot) slot = std::make_unique<QuadratureRule>(build_gauss_hermite(order));
  return *slot;
}

double expect_gaussian(const std::function<double(double)>& h, double mean, double stdev,
                       const QuadratureRule& rule) {
  if (!(stdev >= 0.0)) throw DomainError("expect_gaussian: stdev must be nonnegative");
  if (stdev == 0.0) return checked(h(mean));
  const double scale = std::numbers::sqrt2 * stdev;
  return rule.integrate([&](double x) { return h(mean + scale * x); }) / std::sqrt(std::numbers::pi);
}

GaussianExpectation expect_gaussian_nd(const std::function<double(std::span<const double>)>& h,
                                       std::span<const double> means,
                                       std::span<const double> stdevs,
                                       const QuadratureRule& rule) {
  const std::size_t dim = means.size();
  if (stdevs.size() != dim) throw ConfigError("expect_gaussian_nd: means and stdevs differ in size");

  std::vector<std::size_t> active;
  for (std::size_t k = 0; k < dim; ++k) {
    if (!(stdevs[k] >= 0.0)) throw DomainError("expect_gaussian_nd: stdev must be nonnegative");
    if (stdevs[k] > 0.0) active.push_back(k);
  }

  const std::vector<double> base(means.begin(), means.end());
  if (active.empty()) return {checked(h(base)), 0.0, 1};

  const std::size_t n_active = active.size();

  if (n_active > kMaxTensorDimension) {
    // Randomized Halton: independent Cranley-Patterson shifts give the error estimate.
    static constexpr std::size_t kPrimes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37, 41,
                                              43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97};
    if (n_active > std::size(kPrimes))
      throw DomainError("expect_gaussian_nd: dimension exceeds quasi-random generator support");
    constexpr std::size_t kShifts = 16;
    constexpr std::size_t kPoints = 8192;
    std::vector<double> estimates(kShifts);
    parallel_for(kShifts, 1, [&](std::size_t begin, std::size_t end) {
      std::vector<double> point(base);
      for (std::size_t s = begin; s < end; ++s) {
        StreamRng rng(0x5eed, s);
        std::vector<double> shift(n_active);
        for (auto& u : shift) u = rng.uniform();
        double acc = 0.0;
        for (std::size_t i = 1; i <= kPoints; ++i) {
          for (std::size_t d = 0; d < n_active; ++d) {
            double f = 1.0, r = 0.0;
            for (std::size_t q = i; q > 0; q /= kPrimes[d]) {
              f /= static_cast<double>(kPrimes[d]);
              r += f * static_cast<double>(q % kPrimes[d]);
            }
            double u = r + shift[d];
            if (u >= 1.0) u -= 1.0;
            u = std::clamp(u, 1e-16, 1.0 - 1e-16);
            const double zq = -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * u);
            point[active[d]] = base[active[d]] + stdevs[active[d]] * zq;
          }
          acc += checked(h(point));
        }
        estimates[s] = acc / static_cast<double>(kPoints);
      }
    });
    double mean = 0.0;
    for (double e : estimates) mean += e;
    mean /= kShifts;
    double var = 0.0;
    for (double e : estimates) var += (e - mean) * (e - mean);
    var /= static_cast<double>(kShifts - 1);
    return {mean, std::sqrt(var / kShifts), kShifts * kPoints};
  }

  std::size_t order = rule.order();
  auto node_count = [&](std::size_t o) {
    std::size_t c = 1;
    for (std::size_t d = 0; d < n_active; ++d) c *= o;
    return c;
  };
  while (order > 1 && node_count(order) > kMaxTensorNodes) --order;
  const QuadratureRule& r = order == rule.order() ? rule : gauss_hermite(order);

  const std::size_t total = node_count(order);
  std::vector<double> scale(n_active);
  for (std::size_t d = 0; d < n_active; ++d) scale[d] = std::numbers::sqrt2 * stdevs[active[d]];
  const auto nodes = r.nodes();
  const auto weights = r.weights();

  constexpr std::size_t kGrain = 4096;
  std::vector<double> partial((total + kGrain - 1) / kGrain, 0.0);
  parallel_for(total, kGrain, [&](std::size_t begin, std::size_t end) {
    std::vector<double> point(base);
    double acc = 0.0;
    for (std::size_t flat = begin; flat < end; ++flat) {
      double w = 1.0;
      std::size_t rem = flat;
      for (std::size_t d = 0; d < n_active; ++d) {
        const std::size_t idx = rem % order;
        rem /= order;
        point[active[d]] = base[active[d]] + scale[d] * nodes[idx];
        w *= weights[idx];
      }
      acc += w * checked(h(point));
    }
    partial[begin / kGrain] = acc;
  });
  double sum = 0.0;
  for (double p : partial) sum += p;
  const double norm = std::pow(std::numbers::pi, 0.5 * static_cast<double>(n_active));
  return {sum / norm, 0.0, total};
}

}  // namespace infokernel

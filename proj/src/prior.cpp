#include "infokernel/prior.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include "infokernel/errors.hpp"
#include "infokernel/random.hpp"

namespace infokernel {

namespace {

constexpr double kWeightTolerance = 1e-9;
constexpr double kTableTolerance = 1e-3;
constexpr double kExactTolerance = 1e-14;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

template <class T, class Get>
void normalize_weights(std::vector<T>& items, Get weight, const char* what) {
  if (items.empty()) throw ConfigError(std::string(what) + ": at least one entry required");
  double total = 0.0;
  for (auto& it : items) {
    const double w = weight(it);
    if (!std::isfinite(w) || w < 0.0) throw ConfigError(std::string(what) + ": weights must be nonnegative");
    total += w;
  }
  if (std::fabs(total - 1.0) > kWeightTolerance)
    throw ConfigError(std::string(what) + ": weights must sum to 1");
  // already-normalized input is kept bit-for-bit so that reloads are idempotent
  if (std::fabs(total - 1.0) > kExactTolerance)
    for (auto& it : items) weight(it) /= total;
}

std::vector<double> trapezoid_weights(const std::vector<double>& x) {
  std::vector<double> tw(x.size(), 0.0);
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double h = 0.5 * (x[i + 1] - x[i]);
    tw[i] += h;
    tw[i + 1] += h;
  }
  return tw;
}

// log sum_i exp(e_i) * c_i for c_i >= 0, skipping zero coefficients.
double log_weighted_sum(const std::vector<double>& exponents, const std::vector<double>& coeffs) {
  double emax = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < exponents.size(); ++i)
    if (coeffs[i] > 0.0) emax = std::max(emax, exponents[i]);
  if (!std::isfinite(emax)) throw NumericalError("exponential tilt: normalizing integral is not finite");
  double s = 0.0;
  for (std::size_t i = 0; i < exponents.size(); ++i)
    if (coeffs[i] > 0.0) s += coeffs[i] * std::exp(exponents[i] - emax);
  return emax + std::log(s);
}

}  // namespace

PriorDistribution PriorDistribution::discrete(std::vector<WeightedPoint> points) {
  for (const auto& p : points)
    if (!std::isfinite(p.x)) throw ConfigError("discrete prior: support points must be finite");
  normalize_weights(points, [](WeightedPoint& p) -> double& { return p.w; }, "discrete prior");
  return PriorDistribution(DiscretePrior{std::move(points)});
}

PriorDistribution PriorDistribution::gaussian(double mean, double stdev) {
  return gaussian_mixture({{mean, stdev, 1.0}});
}

PriorDistribution PriorDistribution::gaussian_mixture(std::vector<MixtureComponent> components) {
  for (const auto& c : components)
    if (!std::isfinite(c.mean) || !(c.stdev > 0.0) || !std::isfinite(c.stdev))
      throw ConfigError("gaussian mixture prior: component stdev must be positive and finite");
  normalize_weights(components, [](MixtureComponent& c) -> double& { return c.w; },
                    "gaussian mixture prior");
  return PriorDistribution(GaussianMixturePrior{std::move(components)});
}

PriorDistribution PriorDistribution::tabulated(std::vector<double> x, std::vector<double> density) {
  if (x.size() < 2 || x.size() != density.size())
    throw ConfigError("tabulated prior: need at least two grid points with matching densities");
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(density[i]) || density[i] < 0.0)
      throw ConfigError("tabulated prior: grid and density must be finite, density nonnegative");
    if (i > 0 && !(x[i] > x[i - 1])) throw ConfigError("tabulated prior: grid must be strictly increasing");
  }
  const auto tw = trapezoid_weights(x);
  const double mass = std::inner_product(tw.begin(), tw.end(), density.begin(), 0.0);
  if (std::fabs(mass - 1.0) > kTableTolerance)
    throw ConfigError("tabulated prior: density integrates to " + std::to_string(mass) + ", not 1");
  if (std::fabs(mass - 1.0) > kExactTolerance)
    for (auto& d : density) d /= mass;
  return PriorDistribution(TabulatedPrior{std::move(x), std::move(density)});
}

double PriorDistribution::mean() const {
  return expectation([](double x) { return x; });
}

double PriorDistribution::variance() const {
  const double m = mean();
  return std::visit(overloaded{
                        [&](const GaussianMixturePrior& g) {
                          double s = 0.0;
                          for (const auto& c : g.components)
                            s += c.w * (c.stdev * c.stdev + (c.mean - m) * (c.mean - m));
                          return s;
                        },
                        [&](const auto&) { return expectation([m](double x) { return (x - m) * (x - m); }); },
                    },
                    law_);
}

double PriorDistribution::expectation(const std::function<double(double)>& h, const QuadratureRule& rule) const {
  return std::visit(overloaded{
                        [&](const DiscretePrior& d) {
                          double s = 0.0;
                          for (const auto& p : d.points) s += p.w * h(p.x);
                          return s;
                        },
                        [&](const GaussianMixturePrior& g) {
                          double s = 0.0;
                          for (const auto& c : g.components) s += c.w * expect_gaussian(h, c.mean, c.stdev, rule);
                          return s;
                        },
                        [&](const TabulatedPrior& t) {
                          const auto tw = trapezoid_weights(t.x);
                          double s = 0.0;
                          for (std::size_t i = 0; i < t.x.size(); ++i) s += tw[i] * t.density[i] * h(t.x[i]);
                          return s;
                        },
                    },
                    law_);
}

std::vector<WeightedPoint> PriorDistribution::atoms(const QuadratureRule& rule) const {
  return std::visit(overloaded{
                        [&](const DiscretePrior& d) { return d.points; },
                        [&](const GaussianMixturePrior& g) {
                          std::vector<WeightedPoint> out;
                          const double inv_sqrt_pi = 1.0 / std::sqrt(std::numbers::pi);
                          for (const auto& c : g.components)
                            for (std::size_t i = 0; i < rule.order(); ++i)
                              out.push_back({c.mean + std::numbers::sqrt2 * c.stdev * rule.nodes()[i],
                                             c.w * rule.weights()[i] * inv_sqrt_pi});
                          return out;
                        },
                        [&](const TabulatedPrior& t) {
                          const auto tw = trapezoid_weights(t.x);
                          std::vector<WeightedPoint> out(t.x.size());
                          for (std::size_t i = 0; i < t.x.size(); ++i) out[i] = {t.x[i], tw[i] * t.density[i]};
                          return out;
                        },
                    },
                    law_);
}

ExponentialTilt PriorDistribution::tilt(double linear, double quadratic) const {
  if (!std::isfinite(linear) || !std::isfinite(quadratic))
    throw NumericalError("exponential tilt: non-finite coefficients");
  auto exponent = [&](double x) { return linear * x - 0.5 * quadratic * x * x; };

  return std::visit(
      overloaded{
          [&](const DiscretePrior& d) {
            std::vector<double> e(d.points.size()), c(d.points.size());
            for (std::size_t i = 0; i < d.points.size(); ++i) {
              e[i] = exponent(d.points[i].x);
              c[i] = d.points[i].w;
            }
            const double log_z = log_weighted_sum(e, c);
            std::vector<WeightedPoint> pts(d.points.size());
            for (std::size_t i = 0; i < pts.size(); ++i) pts[i] = {d.points[i].x, c[i] * std::exp(e[i] - log_z)};
            return ExponentialTilt{log_z, PriorDistribution(DiscretePrior{std::move(pts)})};
          },
          [&](const GaussianMixturePrior& g) {
            // Gaussian completion per component:
            //   int N(x; m, s^2) exp(b x - a x^2 / 2) dx
            //     = (1 + a s^2)^{-1/2} exp((2 b m + b^2 s^2 - a m^2) / (2 (1 + a s^2)))
            const std::size_t n = g.components.size();
            std::vector<double> e(n), c(n);
            std::vector<MixtureComponent> post(n);
            for (std::size_t i = 0; i < n; ++i) {
              const auto& comp = g.components[i];
              const double s2 = comp.stdev * comp.stdev;
              const double denom = 1.0 + quadratic * s2;
              if (!(denom > 0.0)) throw NumericalError("exponential tilt: Gaussian integral diverges");
              e[i] = (2.0 * linear * comp.mean + linear * linear * s2 - quadratic * comp.mean * comp.mean) /
                         (2.0 * denom) -
                     0.5 * std::log(denom);
              c[i] = comp.w;
              post[i].mean = (comp.mean + linear * s2) / denom;
              post[i].stdev = std::sqrt(s2 / denom);
            }
            const double log_z = log_weighted_sum(e, c);
            for (std::size_t i = 0; i < n; ++i) post[i].w = c[i] * std::exp(e[i] - log_z);
            return ExponentialTilt{log_z, PriorDistribution(GaussianMixturePrior{std::move(post)})};
          },
          [&](const TabulatedPrior& t) {
            const auto tw = trapezoid_weights(t.x);
            const std::size_t n = t.x.size();
            std::vector<double> e(n), c(n);
            for (std::size_t i = 0; i < n; ++i) {
              e[i] = exponent(t.x[i]);
              c[i] = tw[i] * t.density[i];
            }
            const double log_z = log_weighted_sum(e, c);
            std::vector<double> dens(n);
            for (std::size_t i = 0; i < n; ++i)
              dens[i] = t.density[i] > 0.0 ? t.density[i] * std::exp(e[i] - log_z) : 0.0;
            return ExponentialTilt{log_z, PriorDistribution(TabulatedPrior{t.x, std::move(dens)})};
          },
      },
      law_);
}

double PriorDistribution::sample(StreamRng& rng) const {
  return std::visit(overloaded{
                        [&](const DiscretePrior& d) {
                          const double u = rng.uniform();
                          double acc = 0.0;
                          for (const auto& p : d.points) {
                            acc += p.w;
                            if (u < acc) return p.x;
                          }
                          return d.points.back().x;
                        },
                        [&](const GaussianMixturePrior& g) {
                          const double u = rng.uniform();
                          double acc = 0.0;
                          const MixtureComponent* pick = &g.components.back();
                          for (const auto& c : g.components) {
                            acc += c.w;
                            if (u < acc) {
                              pick = &c;
                              break;
                            }
                          }
                          return pick->mean + pick->stdev * rng.normal();
                        },
                        [&](const TabulatedPrior& t) {
                          // inverse CDF of the piecewise-linear density
                          const double u = rng.uniform();
                          double acc = 0.0;
                          for (std::size_t i = 0; i + 1 < t.x.size(); ++i) {
                            const double h = t.x[i + 1] - t.x[i];
                            const double d0 = t.density[i], d1 = t.density[i + 1];
                            const double mass = 0.5 * h * (d0 + d1);
                            if (u < acc + mass || i + 2 == t.x.size()) {
                              const double m = std::clamp(u - acc, 0.0, mass);
                              const double slope = (d1 - d0) / h;
                              double s;
                              if (std::fabs(slope) * h < 1e-12 * std::max(d0, d1)) {
                                s = d0 > 0.0 ? m / d0 : 0.0;
                              } else {
                                s = (-d0 + std::sqrt(std::max(0.0, d0 * d0 + 2.0 * slope * m))) / slope;
                              }
                              return t.x[i] + std::clamp(s, 0.0, h);
                            }
                            acc += mass;
                          }
                          return t.x.back();
                        },
                    },
                    law_);
}

double prior_mean(const PriorDistribution& p) { return p.mean(); }

}  // namespace infokernel

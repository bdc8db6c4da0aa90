#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "infokernel/information.hpp"

namespace infokernel {

/// Value and the derivatives consumed by the kernel dynamics.
struct KernelJet {
  double value = 0.0;
  double dt = 0.0;                 ///< time derivative
  std::vector<double> gradient;    ///< first derivative in each xi
  std::vector<double> curvature;   ///< second derivative in each xi (diagonal only)
};

/// One term c * exp(-rho * t + sum_k a_k xi_k).
struct ExponentialTerm {
  double c = 1.0;
  double rho = 0.0;
  std::vector<double> a;
  bool operator==(const ExponentialTerm&) const = default;
};

/// Finite-difference steps used when a kernel has no analytic derivatives.
inline constexpr double kTimeStep = 1e-5;
inline constexpr double kSpaceStep = 1e-4;

/// Positive function f(t, xi_1..xi_n) with the derivatives the dynamics need.
///
/// The ExponentialSum family has analytic derivatives. Custom kernels may
/// supply their own jet; otherwise derivatives come from central differences
/// (one-sided in time when t is within one step of 0).
class KernelFunction {
 public:
  using Evaluator = std::function<double(double, std::span<const double>)>;
  using JetEvaluator = std::function<KernelJet(double, std::span<const double>)>;

  static KernelFunction exponential_sum(std::vector<ExponentialTerm> terms);
  static KernelFunction constant(double c, std::size_t arity);
  static KernelFunction custom(std::size_t arity, Evaluator value, JetEvaluator jet = {});

  std::size_t arity() const;
  double value(double t, std::span<const double> xi) const;
  KernelJet jet(double t, std::span<const double> xi) const;

  /// Terms when this is an ExponentialSum kernel, otherwise nullptr.
  const std::vector<ExponentialTerm>* exponential_terms() const;

  /// c * f, keeping the ExponentialSum form when present.
  KernelFunction scaled(double c) const;

  class Impl;

 private:
  explicit KernelFunction(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

enum class KernelKind { nominal, real };

/// Factors with release times T_1 < ... < T_n, the nominal kernel f and an optional real kernel g.
class MarketModel {
 public:
  static constexpr double kDefaultHorizonDelta = 1e-6;

  MarketModel(std::vector<FactorSpec> factors, KernelFunction nominal,
              std::optional<KernelFunction> real = std::nullopt, double horizon_delta = kDefaultHorizonDelta);

  std::span<const FactorSpec> factors() const { return factors_; }
  std::vector<double> release_times() const;
  const KernelFunction& nominal() const { return nominal_; }
  bool has_real() const { return real_.has_value(); }
  /// Throws ConfigError when no real kernel was supplied.
  const KernelFunction& real() const;
  const KernelFunction& kernel(KernelKind kind) const;
  double horizon_delta() const { return horizon_delta_; }
  /// Latest admissible state time, (1 - delta) * T_1.
  double max_time() const;

  /// Throws DomainError unless 0 <= t <= max_time() and the state has one value per factor.
  void validate(const InformationState& state) const;

 private:
  std::vector<FactorSpec> factors_;
  KernelFunction nominal_;
  std::optional<KernelFunction> real_;
  double horizon_delta_;
};

/// pi_t = M^(1)_t ... M^(n)_t f(t, xi) (or g for the real kernel).
double kernel_value(const MarketModel& model, const InformationState& state, KernelKind kind = KernelKind::nominal);

/// L(t, x) = sum_k x_k/(T_k - t) d_k f - 1/2 sum_k d_kk f - df/dt; the short rate is L / f.
double positivity_functional(const KernelJet& jet, std::span<const double> release_times, double t,
                             std::span<const double> xi);

/// Minus the drift rate of the kernel built from `kind`.
double kernel_rate(const MarketModel& model, const InformationState& state, KernelKind kind);

/// Nominal short rate r_t.
double short_rate(const MarketModel& model, const InformationState& state);

/// lambda^k = sigma_k T_k/(T_k - t) E[X_k | xi_k] - d_k f / f.
std::vector<double> market_price_of_risk(const MarketModel& model, const InformationState& state,
                                         KernelKind kind = KernelKind::nominal);

struct PositivityRegion {
  double t_min = 0.0;
  double t_max = 0.0;
  std::vector<double> xi_min;
  std::vector<double> xi_max;
};

struct PositivityReport {
  bool satisfied = true;
  double worst_t = 0.0;
  std::vector<double> worst_xi;
  double worst_value = 0.0;
  std::size_t points = 0;
};

/// Grid certificate for L > 0 on a box: `density` points per axis (>= 2, endpoints included).
PositivityReport check_positivity(const KernelFunction& f, std::span<const double> release_times,
                                  const PositivityRegion& region, std::size_t density);

/// Price of one unit of foreign currency in domestic units, pi^i / pi = f^i / f.
double fx_rate(const MarketModel& foreign, const MarketModel& domestic, const InformationState& state);

}  // namespace infokernel

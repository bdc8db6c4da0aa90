#include "infokernel/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "infokernel/errors.hpp"
#include "infokernel/parallel.hpp"

namespace infokernel {

class KernelFunction::Impl {
 public:
  virtual ~Impl() = default;
  virtual std::size_t arity() const = 0;
  virtual double value(double t, std::span<const double> xi) const = 0;
  virtual KernelJet jet(double t, std::span<const double> xi) const = 0;
  virtual const std::vector<ExponentialTerm>* terms() const { return nullptr; }
};

namespace {

void check_arity(std::size_t expected, std::span<const double> xi) {
  if (xi.size() != expected)
    throw ConfigError("kernel expects " + std::to_string(expected) + " information values, got " +
                      std::to_string(xi.size()));
}

class ExponentialSumImpl final : public KernelFunction::Impl {
 public:
  explicit ExponentialSumImpl(std::vector<ExponentialTerm> terms) : terms_(std::move(terms)) {
    if (terms_.empty()) throw ConfigError("exponential-sum kernel needs at least one term");
    arity_ = terms_[0].a.size();
    for (const auto& term : terms_) {
      if (!(term.c > 0.0) || !std::isfinite(term.c)) throw ConfigError("exponential-sum coefficient c must be positive");
      if (!std::isfinite(term.rho)) throw ConfigError("exponential-sum rate must be finite");
      if (term.a.size() != arity_) throw ConfigError("exponential-sum terms must share one arity");
      for (double a : term.a)
        if (!std::isfinite(a)) throw ConfigError("exponential-sum loadings must be finite");
    }
  }

  std::size_t arity() const override { return arity_; }

  double value(double t, std::span<const double> xi) const override {
    check_arity(arity_, xi);
    double s = 0.0;
    for (const auto& term : terms_) s += term_value(term, t, xi);
    return s;
  }

  KernelJet jet(double t, std::span<const double> xi) const override {
    check_arity(arity_, xi);
    KernelJet j{0.0, 0.0, std::vector<double>(arity_, 0.0), std::vector<double>(arity_, 0.0)};
    for (const auto& term : terms_) {
      const double v = term_value(term, t, xi);
      j.value += v;
      j.dt -= term.rho * v;
      for (std::size_t k = 0; k < arity_; ++k) {
        j.gradient[k] += term.a[k] * v;
        j.curvature[k] += term.a[k] * term.a[k] * v;
      }
    }
    return j;
  }

  const std::vector<ExponentialTerm>* terms() const override { return &terms_; }

 private:
  static double term_value(const ExponentialTerm& term, double t, std::span<const double> xi) {
    double e = -term.rho * t;
    for (std::size_t k = 0; k < xi.size(); ++k) e += term.a[k] * xi[k];
    return term.c * std::exp(e);
  }

  std::vector<ExponentialTerm> terms_;
  std::size_t arity_ = 0;
};

KernelJet finite_difference_jet(const KernelFunction::Evaluator& f, double t, std::span<const double> xi) {
  const std::size_t n = xi.size();
  KernelJet j{f(t, xi), 0.0, std::vector<double>(n), std::vector<double>(n)};
  const double ht = kTimeStep;
  if (t >= ht) {
    j.dt = (f(t + ht, xi) - f(t - ht, xi)) / (2.0 * ht);
  } else {
    j.dt = (-3.0 * j.value + 4.0 * f(t + ht, xi) - f(t + 2.0 * ht, xi)) / (2.0 * ht);
  }
  std::vector<double> x(xi.begin(), xi.end());
  const double hx = kSpaceStep;
  for (std::size_t k = 0; k < n; ++k) {
    x[k] = xi[k] + hx;
    const double up = f(t, x);
    x[k] = xi[k] - hx;
    const double down = f(t, x);
    x[k] = xi[k];
    j.gradient[k] = (up - down) / (2.0 * hx);
    j.curvature[k] = (up - 2.0 * j.value + down) / (hx * hx);
  }
  return j;
}

class CustomImpl final : public KernelFunction::Impl {
 public:
  CustomImpl(std::size_t arity, KernelFunction::Evaluator value, KernelFunction::JetEvaluator jet)
      : arity_(arity), value_(std::move(value)), jet_(std::move(jet)) {
    if (!value_) throw ConfigError("custom kernel needs a value evaluator");
  }
  std::size_t arity() const override { return arity_; }
  double value(double t, std::span<const double> xi) const override {
    check_arity(arity_, xi);
    return value_(t, xi);
  }
  KernelJet jet(double t, std::span<const double> xi) const override {
    check_arity(arity_, xi);
    return jet_ ? jet_(t, xi) : finite_difference_jet(value_, t, xi);
  }

 private:
  std::size_t arity_;
  KernelFunction::Evaluator value_;
  KernelFunction::JetEvaluator jet_;
};

void require_positive(double v) {
  if (!(v > 0.0) || !std::isfinite(v)) throw NumericalError("kernel function must be positive and finite");
}

}  // namespace

KernelFunction KernelFunction::exponential_sum(std::vector<ExponentialTerm> terms) {
  return KernelFunction(std::make_shared<ExponentialSumImpl>(std::move(terms)));
}

KernelFunction KernelFunction::constant(double c, std::size_t arity) {
  return exponential_sum({ExponentialTerm{c, 0.0, std::vector<double>(arity, 0.0)}});
}

KernelFunction KernelFunction::custom(std::size_t arity, Evaluator value, JetEvaluator jet) {
  return KernelFunction(std::make_shared<CustomImpl>(arity, std::move(value), std::move(jet)));
}

std::size_t KernelFunction::arity() const { return impl_->arity(); }
double KernelFunction::value(double t, std::span<const double> xi) const { return impl_->value(t, xi); }
KernelJet KernelFunction::jet(double t, std::span<const double> xi) const { return impl_->jet(t, xi); }
const std::vector<ExponentialTerm>* KernelFunction::exponential_terms() const { return impl_->terms(); }

KernelFunction KernelFunction::scaled(double c) const {
  if (!(c > 0.0) || !std::isfinite(c)) throw ConfigError("kernel scale must be positive");
  if (const auto* terms = exponential_terms()) {
    auto copy = *terms;
    for (auto& term : copy) term.c *= c;
    return exponential_sum(std::move(copy));
  }
  auto base = impl_;
  return custom(
      arity(), [base, c](double t, std::span<const double> xi) { return c * base->value(t, xi); },
      [base, c](double t, std::span<const double> xi) {
        KernelJet j = base->jet(t, xi);
        j.value *= c;
        j.dt *= c;
        for (auto& g : j.gradient) g *= c;
        for (auto& h : j.curvature) h *= c;
        return j;
      });
}

MarketModel::MarketModel(std::vector<FactorSpec> factors, KernelFunction nominal, std::optional<KernelFunction> real,
                         double horizon_delta)
    : factors_(std::move(factors)), nominal_(std::move(nominal)), real_(std::move(real)), horizon_delta_(horizon_delta) {
  if (factors_.empty()) throw ConfigError("market model needs at least one factor");
  for (std::size_t k = 1; k < factors_.size(); ++k)
    if (!(factors_[k].release_time() > factors_[k - 1].release_time()))
      throw ConfigError("factor release times must be strictly increasing");
  if (nominal_.arity() != factors_.size()) throw ConfigError("nominal kernel arity differs from factor count");
  if (real_ && real_->arity() != factors_.size()) throw ConfigError("real kernel arity differs from factor count");
  if (!(horizon_delta_ > 0.0) || !(horizon_delta_ < 1.0)) throw ConfigError("horizon delta must lie in (0, 1)");
}

std::vector<double> MarketModel::release_times() const {
  std::vector<double> out;
  out.reserve(factors_.size());
  for (const auto& f : factors_) out.push_back(f.release_time());
  return out;
}

const KernelFunction& MarketModel::real() const {
  if (!real_) throw ConfigError("model has no real kernel g");
  return *real_;
}

const KernelFunction& MarketModel::kernel(KernelKind kind) const {
  return kind == KernelKind::nominal ? nominal_ : real();
}

double MarketModel::max_time() const { return (1.0 - horizon_delta_) * factors_.front().release_time(); }

void MarketModel::validate(const InformationState& state) const {
  if (state.xi.size() != factors_.size())
    throw DomainError("state has " + std::to_string(state.xi.size()) + " information values for " +
                      std::to_string(factors_.size()) + " factors");
  if (!(state.t >= 0.0) || state.t > max_time())
    throw DomainError("state time " + std::to_string(state.t) + " outside [0, " + std::to_string(max_time()) + "]");
  for (double x : state.xi)
    if (!std::isfinite(x)) throw DomainError("state information values must be finite");
}

double kernel_value(const MarketModel& model, const InformationState& state, KernelKind kind) {
  model.validate(state);
  const double f = model.kernel(kind).value(state.t, state.xi);
  require_positive(f);
  return density_martingale_product(model.factors(), state) * f;
}

double positivity_functional(const KernelJet& jet, std::span<const double> release_times, double t,
                             std::span<const double> xi) {
  double s = -jet.dt;
  for (std::size_t k = 0; k < xi.size(); ++k)
    s += xi[k] / (release_times[k] - t) * jet.gradient[k] - 0.5 * jet.curvature[k];
  return s;
}

double kernel_rate(const MarketModel& model, const InformationState& state, KernelKind kind) {
  model.validate(state);
  const KernelJet jet = model.kernel(kind).jet(state.t, state.xi);
  require_positive(jet.value);
  return positivity_functional(jet, model.release_times(), state.t, state.xi) / jet.value;
}

double short_rate(const MarketModel& model, const InformationState& state) {
  return kernel_rate(model, state, KernelKind::nominal);
}

std::vector<double> market_price_of_risk(const MarketModel& model, const InformationState& state, KernelKind kind) {
  model.validate(state);
  const KernelJet jet = model.kernel(kind).jet(state.t, state.xi);
  require_positive(jet.value);
  const auto factors = model.factors();
  std::vector<double> lambda(factors.size());
  for (std::size_t k = 0; k < factors.size(); ++k) {
    const double T = factors[k].release_time();
    const double filtered = filter_expectation(factors[k], state.t, state.xi[k]);
    lambda[k] = factors[k].sigma() * T / (T - state.t) * filtered - jet.gradient[k] / jet.value;
  }
  return lambda;
}

PositivityReport check_positivity(const KernelFunction& f, std::span<const double> release_times,
                                  const PositivityRegion& region, std::size_t density) {
  const std::size_t n = f.arity();
  if (release_times.size() != n || region.xi_min.size() != n || region.xi_max.size() != n)
    throw ConfigError("positivity region dimension differs from kernel arity");
  if (density < 2) throw ConfigError("positivity grid density must be at least 2");
  if (!(region.t_min >= 0.0) || region.t_max < region.t_min) throw DomainError("positivity region: bad time range");
  for (double T : release_times)
    if (!(region.t_max < T)) throw DomainError("positivity region must end before every release time");
  for (std::size_t k = 0; k < n; ++k)
    if (region.xi_max[k] < region.xi_min[k]) throw DomainError("positivity region: bad information range");

  auto coord = [density](double lo, double hi, std::size_t i) {
    return i + 1 == density ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(density - 1);
  };

  std::size_t total = density;
  for (std::size_t k = 0; k < n; ++k) total *= density;

  constexpr std::size_t kGrain = 1024;
  struct Worst {
    double value = std::numeric_limits<double>::infinity();
    std::size_t index = 0;
  };
  std::vector<Worst> chunk_worst((total + kGrain - 1) / kGrain);

  auto point_of = [&](std::size_t flat, std::vector<double>& xi) {
    std::size_t rem = flat;
    const double t = coord(region.t_min, region.t_max, rem % density);
    rem /= density;
    for (std::size_t k = 0; k < n; ++k) {
      xi[k] = coord(region.xi_min[k], region.xi_max[k], rem % density);
      rem /= density;
    }
    return t;
  };

  parallel_for(total, kGrain, [&](std::size_t begin, std::size_t end) {
    std::vector<double> xi(n);
    Worst w;
    for (std::size_t flat = begin; flat < end; ++flat) {
      const double t = point_of(flat, xi);
      const double v = positivity_functional(f.jet(t, xi), release_times, t, xi);
      if (!std::isfinite(v)) throw NumericalError("positivity functional is not finite on the grid");
      if (v < w.value) w = {v, flat};
    }
    chunk_worst[begin / kGrain] = w;
  });

  Worst worst;
  for (const auto& w : chunk_worst)
    if (w.value < worst.value) worst = w;

  PositivityReport report;
  report.points = total;
  report.worst_xi.resize(n);
  report.worst_t = point_of(worst.index, report.worst_xi);
  report.worst_value = worst.value;
  report.satisfied = worst.value > 0.0;
  return report;
}

double fx_rate(const MarketModel& foreign, const MarketModel& domestic, const InformationState& state) {
  const auto a = foreign.factors();
  const auto b = domestic.factors();
  if (!std::equal(a.begin(), a.end(), b.begin(), b.end()))
    throw ConfigError("foreign and domestic kernels must share the same factors");
  domestic.validate(state);
  const double num = foreign.nominal().value(state.t, state.xi);
  const double den = domestic.nominal().value(state.t, state.xi);
  require_positive(num);
  require_positive(den);
  return num / den;
}

}  // namespace infokernel

#include "infokernel/config.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>
#include <variant>

#include "json.hpp"

#include "infokernel/errors.hpp"

namespace infokernel {

using nlohmann::json;

namespace {

void allow_only(const json& obj, std::string_view where, std::initializer_list<std::string_view> keys) {
  if (!obj.is_object()) throw ConfigError(std::string(where) + ": expected an object");
  for (const auto& [key, _] : obj.items()) {
    bool known = false;
    for (auto k : keys) known = known || key == k;
    if (!known) throw ConfigError(std::string(where) + ": unknown key '" + key + "'");
  }
}

const json& require(const json& obj, std::string_view where, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError(std::string(where) + ": missing key '" + key + "'");
  return *it;
}

double number(const json& v, std::string_view where) {
  if (!v.is_number()) throw ConfigError(std::string(where) + ": expected a number");
  return v.get<double>();
}

std::vector<double> numbers(const json& v, std::string_view where) {
  if (!v.is_array()) throw ConfigError(std::string(where) + ": expected an array of numbers");
  std::vector<double> out;
  for (const auto& x : v) out.push_back(number(x, where));
  return out;
}

std::uint64_t count(const json& v, std::string_view where) {
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
    throw ConfigError(std::string(where) + ": expected a nonnegative integer");
  return v.get<std::uint64_t>();
}

PriorDistribution parse_prior(const json& j, const std::string& where) {
  const auto& type = require(j, where, "type");
  if (!type.is_string()) throw ConfigError(where + ".type: expected a string");
  const auto kind = type.get<std::string>();
  if (kind == "discrete") {
    allow_only(j, where, {"type", "points"});
    std::vector<WeightedPoint> pts;
    for (const auto& p : require(j, where, "points")) {
      allow_only(p, where + ".points[]", {"x", "w"});
      pts.push_back({number(require(p, where, "x"), where + ".x"), number(require(p, where, "w"), where + ".w")});
    }
    return PriorDistribution::discrete(std::move(pts));
  }
  if (kind == "gaussian") {
    allow_only(j, where, {"type", "mean", "stdev"});
    return PriorDistribution::gaussian(number(require(j, where, "mean"), where + ".mean"),
                                       number(require(j, where, "stdev"), where + ".stdev"));
  }
  if (kind == "gaussian_mixture") {
    allow_only(j, where, {"type", "components"});
    std::vector<MixtureComponent> comps;
    for (const auto& c : require(j, where, "components")) {
      allow_only(c, where + ".components[]", {"mean", "stdev", "w"});
      comps.push_back({number(require(c, where, "mean"), where), number(require(c, where, "stdev"), where),
                       number(require(c, where, "w"), where)});
    }
    return PriorDistribution::gaussian_mixture(std::move(comps));
  }
  if (kind == "tabulated") {
    allow_only(j, where, {"type", "x", "density"});
    return PriorDistribution::tabulated(numbers(require(j, where, "x"), where + ".x"),
                                        numbers(require(j, where, "density"), where + ".density"));
  }
  throw ConfigError(where + ".type: unknown prior type '" + kind + "'");
}

json dump_prior(const PriorDistribution& p) {
  return std::visit(
      [](const auto& law) -> json {
        using T = std::decay_t<decltype(law)>;
        if constexpr (std::is_same_v<T, DiscretePrior>) {
          json pts = json::array();
          for (const auto& pt : law.points) pts.push_back({{"x", pt.x}, {"w", pt.w}});
          return {{"type", "discrete"}, {"points", pts}};
        } else if constexpr (std::is_same_v<T, GaussianMixturePrior>) {
          json comps = json::array();
          for (const auto& c : law.components) comps.push_back({{"mean", c.mean}, {"stdev", c.stdev}, {"w", c.w}});
          return {{"type", "gaussian_mixture"}, {"components", comps}};
        } else {
          return {{"type", "tabulated"}, {"x", law.x}, {"density", law.density}};
        }
      },
      p.variant());
}

std::vector<ExponentialTerm> parse_terms(const json& j, const std::string& where, std::size_t arity) {
  allow_only(j, where, {"terms"});
  const auto& terms = require(j, where, "terms");
  if (!terms.is_array() || terms.empty()) throw ConfigError(where + ".terms: expected a non-empty array");
  std::vector<ExponentialTerm> out;
  for (const auto& t : terms) {
    allow_only(t, where + ".terms[]", {"c", "rho", "a"});
    ExponentialTerm term;
    term.c = t.contains("c") ? number(t["c"], where + ".c") : 1.0;
    term.rho = t.contains("rho") ? number(t["rho"], where + ".rho") : 0.0;
    term.a = t.contains("a") ? numbers(t["a"], where + ".a") : std::vector<double>(arity, 0.0);
    if (term.a.size() != arity)
      throw ConfigError(where + ".a: expected " + std::to_string(arity) + " loadings, one per factor");
    out.push_back(std::move(term));
  }
  // construction validates positivity of c and finiteness
  (void)KernelFunction::exponential_sum(out);
  return out;
}

json dump_terms(const std::vector<ExponentialTerm>& terms) {
  json arr = json::array();
  for (const auto& t : terms) arr.push_back({{"c", t.c}, {"rho", t.rho}, {"a", t.a}});
  return {{"terms", arr}};
}

}  // namespace

MarketModel ModelConfig::market_model() const {
  std::optional<KernelFunction> real;
  if (real_terms) real = KernelFunction::exponential_sum(*real_terms);
  if (nominal_terms)
    return MarketModel(factors, KernelFunction::exponential_sum(*nominal_terms), real, numerics.horizon_delta);
  if (economy) {
    const auto spec = economy_spec();
    return MarketModel(factors, spec.induced_model().nominal(), real ? real : spec.induced_model().real(),
                       numerics.horizon_delta);
  }
  throw ConfigError("config has neither a nominal kernel nor an economy block");
}

EconomySpec ModelConfig::economy_spec() const {
  if (!economy) throw ConfigError("config has no economy block");
  const auto& e = *economy;
  return EconomySpec(factors, EconomySpec::exponential_discount(e.gamma_rate), e.a, e.b, e.lagrange,
                     KernelFunction::exponential_sum(e.consumption), KernelFunction::exponential_sum(e.money_supply),
                     KernelFunction::exponential_sum(e.liquidity_benefit), numerics.horizon_delta);
}

ModelConfig parse_config(std::string_view text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  allow_only(root, "config", {"factors", "nominal_kernel", "real_kernel", "economy", "numerics"});

  ModelConfig cfg;
  try {
    const auto& factors = require(root, "config", "factors");
    if (!factors.is_array() || factors.empty()) throw ConfigError("factors: expected a non-empty array");
    for (std::size_t i = 0; i < factors.size(); ++i) {
      const std::string where = "factors[" + std::to_string(i) + "]";
      const auto& f = factors[i];
      allow_only(f, where, {"sigma", "release_time", "prior"});
      cfg.factors.emplace_back(number(require(f, where, "sigma"), where + ".sigma"),
                               number(require(f, where, "release_time"), where + ".release_time"),
                               parse_prior(require(f, where, "prior"), where + ".prior"));
    }
    const std::size_t n = cfg.factors.size();

    if (root.contains("nominal_kernel")) cfg.nominal_terms = parse_terms(root["nominal_kernel"], "nominal_kernel", n);
    if (root.contains("real_kernel")) cfg.real_terms = parse_terms(root["real_kernel"], "real_kernel", n);

    if (root.contains("economy")) {
      const auto& e = root["economy"];
      allow_only(e, "economy",
                 {"gamma_rate", "a", "b", "lagrange", "consumption", "money_supply", "liquidity_benefit"});
      EconomyConfig ec;
      if (e.contains("gamma_rate")) ec.gamma_rate = number(e["gamma_rate"], "economy.gamma_rate");
      if (e.contains("a")) ec.a = number(e["a"], "economy.a");
      if (e.contains("b")) ec.b = number(e["b"], "economy.b");
      if (e.contains("lagrange")) ec.lagrange = number(e["lagrange"], "economy.lagrange");
      ec.consumption = parse_terms(require(e, "economy", "consumption"), "economy.consumption", n);
      ec.money_supply = parse_terms(require(e, "economy", "money_supply"), "economy.money_supply", n);
      ec.liquidity_benefit = parse_terms(require(e, "economy", "liquidity_benefit"), "economy.liquidity_benefit", n);
      cfg.economy = std::move(ec);
    }

    if (root.contains("numerics")) {
      const auto& nm = root["numerics"];
      allow_only(nm, "numerics", {"quadrature_order", "clamp", "horizon_delta", "mc_paths", "seed", "grid_step"});
      auto& out = cfg.numerics;
      if (nm.contains("quadrature_order")) out.quadrature_order = count(nm["quadrature_order"], "numerics.quadrature_order");
      if (nm.contains("clamp")) out.clamp = number(nm["clamp"], "numerics.clamp");
      if (nm.contains("horizon_delta")) out.horizon_delta = number(nm["horizon_delta"], "numerics.horizon_delta");
      if (nm.contains("mc_paths")) out.mc_paths = count(nm["mc_paths"], "numerics.mc_paths");
      if (nm.contains("seed")) out.seed = count(nm["seed"], "numerics.seed");
      if (nm.contains("grid_step")) out.grid_step = number(nm["grid_step"], "numerics.grid_step");
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }

  const auto& nm = cfg.numerics;
  if (nm.quadrature_order == 0) throw ConfigError("numerics.quadrature_order must be at least 1");
  if (!(nm.clamp > 0.0) || !(nm.clamp < 1.0)) throw ConfigError("numerics.clamp must lie in (0, 1)");
  if (!(nm.grid_step > 0.0)) throw ConfigError("numerics.grid_step must be positive");
  if (!cfg.nominal_terms && !cfg.economy) throw ConfigError("config needs a nominal_kernel or an economy block");

  // enforce every model constraint at load time
  (void)cfg.market_model();
  if (cfg.economy) (void)cfg.economy_spec();
  return cfg;
}

ModelConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string dump_config(const ModelConfig& cfg) {
  json root;
  json factors = json::array();
  for (const auto& f : cfg.factors)
    factors.push_back({{"sigma", f.sigma()}, {"release_time", f.release_time()}, {"prior", dump_prior(f.prior())}});
  root["factors"] = factors;
  if (cfg.nominal_terms) root["nominal_kernel"] = dump_terms(*cfg.nominal_terms);
  if (cfg.real_terms) root["real_kernel"] = dump_terms(*cfg.real_terms);
  if (cfg.economy) {
    const auto& e = *cfg.economy;
    root["economy"] = {{"gamma_rate", e.gamma_rate},
                       {"a", e.a},
                       {"b", e.b},
                       {"lagrange", e.lagrange},
                       {"consumption", dump_terms(e.consumption)},
                       {"money_supply", dump_terms(e.money_supply)},
                       {"liquidity_benefit", dump_terms(e.liquidity_benefit)}};
  }
  const auto& nm = cfg.numerics;
  root["numerics"] = {{"quadrature_order", nm.quadrature_order}, {"clamp", nm.clamp},
                      {"horizon_delta", nm.horizon_delta},       {"mc_paths", nm.mc_paths},
                      {"seed", nm.seed},                         {"grid_step", nm.grid_step}};
  return root.dump(2) + "\n";
}

}  // namespace infokernel

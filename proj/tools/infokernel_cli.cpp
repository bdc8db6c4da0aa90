// infokernel: command-line front end for the information-based pricing library.
//
// Every command reads a JSON model file (--config) and writes CSV with a
// header row, or a JSON array of row objects with --json. Exit codes:
//   0 success, 2 configuration or usage error, 3 domain/numerical error,
//   4 positivity violated (check-positivity only).

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "json.hpp"

#include "infokernel/config.hpp"
#include "infokernel/errors.hpp"
#include "infokernel/inflation.hpp"

using namespace infokernel;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitDomain = 3;
constexpr int kExitViolated = 4;

using Cell = std::variant<double, std::uint64_t, bool>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

std::string format_cell(const Cell& c) {
  return std::visit(
      [](auto v) -> std::string {
        using T = decltype(v);
        if constexpr (std::is_same_v<T, double>) return fmt::format("{:.17g}", v);
        else if constexpr (std::is_same_v<T, bool>) return v ? "true" : "false";
        else return fmt::format("{}", v);
      },
      c);
}

std::string render_csv(const Table& t) {
  std::string out;
  for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + t.columns[i];
  out += '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + format_cell(row[i]);
    out += '\n';
  }
  return out;
}

std::string render_json(const Table& t) {
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i) std::visit([&](auto v) { obj[t.columns[i]] = v; }, row[i]);
    rows.push_back(std::move(obj));
  }
  return rows.dump(2) + "\n";
}

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> paths;
  std::optional<std::size_t> order;
  bool json = false;
  std::string out;
};

struct StateArgs {
  double t = 0.0;
  std::vector<double> xi;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config, "Model file (JSON)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--seed", c.seed, "Random seed (overrides the config)");
  cmd->add_option("--paths", c.paths, "Monte Carlo paths (overrides the config)");
  cmd->add_option("--order", c.order, "Gauss-Hermite order (overrides the config)")->check(CLI::PositiveNumber);
  cmd->add_flag("--json", c.json, "Write JSON instead of CSV");
  cmd->add_option("--out", c.out, "Output file (default: stdout)");
}

void add_state(CLI::App* cmd, StateArgs& s) {
  cmd->add_option("--t", s.t, "Valuation time in years");
  cmd->add_option("--xi", s.xi, "Information values, one per factor (default: zeros)")->delimiter(',');
}

InformationState make_state(const ModelConfig& cfg, const StateArgs& s) {
  InformationState st{s.t, s.xi};
  if (st.xi.empty()) st.xi.assign(cfg.factors.size(), 0.0);
  return st;
}

struct Context {
  ModelConfig cfg;
  const QuadratureRule* rule = nullptr;
  std::uint64_t seed = 0;
  std::size_t paths = 0;
};

Context load(const Common& c) {
  Context ctx{load_config(c.config)};
  ctx.rule = &gauss_hermite(c.order.value_or(ctx.cfg.numerics.quadrature_order));
  ctx.seed = c.seed.value_or(ctx.cfg.numerics.seed);
  ctx.paths = c.paths.value_or(ctx.cfg.numerics.mc_paths);
  return ctx;
}

void emit(const Common& c, const Table& t) {
  const std::string text = c.json ? render_json(t) : render_csv(t);
  if (c.out.empty()) {
    std::fwrite(text.data(), 1, text.size(), stdout);
    std::fflush(stdout);
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) throw ConfigError("cannot open output file " + c.out);
  f << text;
}

std::vector<double> indexed(const std::string& prefix, std::size_t n, std::vector<std::string>& columns) {
  for (std::size_t k = 1; k <= n; ++k) columns.push_back(prefix + std::to_string(k));
  return {};
}

Table price_bond_table(const Context& ctx, const InformationState& st, const std::vector<double>& maturities,
                       bool with_mc) {
  const auto model = ctx.cfg.market_model();
  Table t{{"t", "T", "price", "yield"}, {}};
  if (with_mc) {
    t.columns.push_back("mc_price");
    t.columns.push_back("mc_standard_error");
  }
  for (const auto& q : yield_curve(model, st, maturities, *ctx.rule)) {
    std::vector<Cell> row{q.t, q.T, q.price, q.yield};
    if (with_mc) {
      const auto mc = mc_price_bond(model, st, q.T, ctx.paths, ctx.seed);
      row.push_back(mc.value);
      row.push_back(mc.standard_error);
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Information-based pricing kernels: bonds, inflation and a monetary economy"};
  app.require_subcommand(1);

  Common common;
  StateArgs state;
  std::vector<double> maturities;

  // price-bond
  bool with_mc = false;
  auto* bond = app.add_subcommand("price-bond", "Nominal discount bonds by bridge-measure quadrature");
  add_common(bond, common);
  add_state(bond, state);
  bond->add_option("--maturities", maturities, "Bond maturities in years")->required()->delimiter(',');
  bond->add_flag("--mc", with_mc, "Add a Monte Carlo estimate under the physical measure");

  // price-linker
  auto* linker = app.add_subcommand("price-linker", "Inflation-linked discount bonds");
  add_common(linker, common);
  add_state(linker, state);
  linker->add_option("--maturities", maturities, "Bond maturities in years")->required()->delimiter(',');

  // yield-curve
  std::optional<double> curve_to;
  std::size_t curve_count = 20;
  auto* curve = app.add_subcommand("yield-curve", "Evenly spaced nominal curve from t to --to");
  add_common(curve, common);
  add_state(curve, state);
  curve->add_option("--to", curve_to, "Longest maturity (default: 99% of the first release time)");
  curve->add_option("--count", curve_count, "Number of intervals")->check(CLI::PositiveNumber);

  // simulate
  std::vector<double> grid;
  std::optional<double> sim_step, sim_horizon;
  bool innovations = false;
  auto* sim = app.add_subcommand("simulate", "Simulate information paths under the physical measure");
  add_common(sim, common);
  sim->add_option("--grid", grid, "Explicit time grid")->delimiter(',');
  sim->add_option("--step", sim_step, "Grid step (default: numerics.grid_step)");
  sim->add_option("--horizon", sim_horizon, "Last grid time (default: 99% of the first release time)");
  sim->add_flag("--innovations", innovations, "Add the innovation process W for each factor");

  // filter
  auto* filt = app.add_subcommand("filter", "Filter, posterior variance and density martingale per factor");
  add_common(filt, common);
  add_state(filt, state);

  // check-positivity
  double t_min = 0.0;
  std::optional<double> t_max;
  std::vector<double> xi_min{-3.0}, xi_max{3.0};
  std::size_t density = 21;
  auto* pos = app.add_subcommand("check-positivity", "Grid certificate for a positive short rate");
  add_common(pos, common);
  pos->add_option("--t-min", t_min, "Box start time");
  pos->add_option("--t-max", t_max, "Box end time (default: 99% of the first release time)");
  pos->add_option("--xi-min", xi_min, "Lower information bounds (one value applies to all factors)")->delimiter(',');
  pos->add_option("--xi-max", xi_max, "Upper information bounds (one value applies to all factors)")->delimiter(',');
  pos->add_option("--density", density, "Grid points per axis")->check(CLI::Range(std::size_t{2}, std::size_t{100000}));

  // inflation
  auto* infl = app.add_subcommand("inflation", "Nominal and linker prices, price level, inflation rate and volatility");
  add_common(infl, common);
  add_state(infl, state);
  infl->add_option("--maturities", maturities, "Bond maturities in years")->required()->delimiter(',');

  // economy-price
  auto* econ = app.add_subcommand("economy-price", "Bonds and price level from the monetary economy block");
  add_common(econ, common);
  add_state(econ, state);
  econ->add_option("--maturities", maturities, "Bond maturities in years")->required()->delimiter(',');

  // budget
  double budget_horizon = 1.0;
  std::optional<double> budget_step;
  auto* budget = app.add_subcommand("budget", "Monte Carlo budget of the economy's representative agent");
  add_common(budget, common);
  budget->add_option("--horizon", budget_horizon, "End of the consumption period in years")->required();
  budget->add_option("--step", budget_step, "Time step of the trapezoid rule (default: numerics.grid_step)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    const Context ctx = load(common);
    const auto& cfg = ctx.cfg;
    const std::size_t n = cfg.factors.size();
    const double first_release = cfg.factors.front().release_time();

    if (bond->parsed()) {
      emit(common, price_bond_table(ctx, make_state(cfg, state), maturities, with_mc));

    } else if (linker->parsed()) {
      const auto model = cfg.market_model();
      (void)model.real();
      Table t{{"t", "T", "price", "real_yield"}, {}};
      for (double T : maturities) {
        const auto q = price_linker(model, make_state(cfg, state), T, *ctx.rule);
        t.rows.push_back({q.t, q.T, q.price, q.yield});
      }
      emit(common, t);

    } else if (curve->parsed()) {
      const double to = curve_to.value_or(0.99 * first_release);
      if (!(to >= state.t)) throw DomainError("--to precedes the valuation time");
      std::vector<double> mats;
      for (std::size_t i = 0; i <= curve_count; ++i)
        mats.push_back(i == curve_count ? to
                                        : state.t + (to - state.t) * static_cast<double>(i) /
                                                        static_cast<double>(curve_count));
      emit(common, price_bond_table(ctx, make_state(cfg, state), mats, false));

    } else if (sim->parsed()) {
      if (grid.empty()) {
        const double step = sim_step.value_or(cfg.numerics.grid_step);
        const double horizon = sim_horizon.value_or(0.99 * first_release);
        if (!(step > 0.0)) throw DomainError("--step must be positive");
        if (!(horizon >= 0.0)) throw DomainError("--horizon must be nonnegative");
        const auto steps = static_cast<std::size_t>(std::ceil(horizon / step - 1e-9));
        for (std::size_t i = 0; i < steps; ++i) grid.push_back(step * static_cast<double>(i));
        grid.push_back(horizon);
      }
      const auto paths = simulate_paths(cfg.factors, grid, ctx.paths, ctx.seed);
      Table t{{"path", "time", "factor", "xi"}, {}};
      if (innovations) t.columns.push_back("W");
      for (std::size_t p = 0; p < paths.size(); ++p) {
        std::vector<std::vector<double>> w;
        if (innovations)
          for (std::size_t k = 0; k < n; ++k) w.push_back(innovation_increments(cfg.factors[k], paths[p], k));
        for (std::size_t i = 0; i < grid.size(); ++i) {
          for (std::size_t k = 0; k < n; ++k) {
            std::vector<Cell> row{std::uint64_t{p}, grid[i], std::uint64_t{k + 1}, paths[p].value(i, k)};
            if (innovations) row.push_back(w[k][i]);
            t.rows.push_back(std::move(row));
          }
        }
      }
      emit(common, t);

    } else if (filt->parsed()) {
      const auto st = make_state(cfg, state);
      if (st.xi.size() != n) throw DomainError("--xi needs one value per factor");
      Table t{{"factor", "t", "xi", "filter", "posterior_variance", "density_martingale"}, {}};
      for (std::size_t k = 0; k < n; ++k) {
        const auto post = posterior_density(cfg.factors[k], st.t, st.xi[k]);
        t.rows.push_back({std::uint64_t{k + 1}, st.t, st.xi[k], filter_expectation(cfg.factors[k], st.t, st.xi[k]),
                          post.variance(), density_martingale(cfg.factors[k], st.t, st.xi[k])});
      }
      emit(common, t);

    } else if (pos->parsed()) {
      const auto model = cfg.market_model();
      auto widen = [n](std::vector<double> v) {
        if (v.size() == 1) v.assign(n, v.front());
        if (v.size() != n) throw DomainError("information bounds need one value or one per factor");
        return v;
      };
      const PositivityRegion region{t_min, t_max.value_or(0.99 * first_release), widen(xi_min), widen(xi_max)};
      const auto report = check_positivity(model.nominal(), model.release_times(), region, density);
      Table t{{"satisfied", "worst_t"}, {}};
      indexed("worst_xi_", n, t.columns);
      t.columns.push_back("worst_value");
      t.columns.push_back("points");
      std::vector<Cell> row{report.satisfied, report.worst_t};
      for (double x : report.worst_xi) row.push_back(x);
      row.push_back(report.worst_value);
      row.push_back(std::uint64_t{report.points});
      t.rows.push_back(std::move(row));
      emit(common, t);
      return report.satisfied ? 0 : kExitViolated;

    } else if (infl->parsed()) {
      const auto model = cfg.market_model();
      (void)model.real();
      const auto st = make_state(cfg, state);
      const double level = price_level(model, st);
      const auto dyn = price_level_dynamics(model, st);
      Table t{{"t", "T", "P", "Q", "C", "I"}, {}};
      indexed("vol_", n, t.columns);
      for (double T : maturities) {
        std::vector<Cell> row{st.t, T, price_bond(model, st, T, *ctx.rule).price,
                              price_linker(model, st, T, *ctx.rule).price, level, dyn.drift};
        for (double v : dyn.vol) row.push_back(v);
        t.rows.push_back(std::move(row));
      }
      emit(common, t);

    } else if (econ->parsed()) {
      const auto spec = cfg.economy_spec();
      for (const auto& w : spec.warnings()) std::cerr << "infokernel: warning: " << w << '\n';
      const auto st = make_state(cfg, state);
      const double level = economy_price_level(spec, st);
      Table t{{"t", "T", "P", "Q", "C"}, {}};
      for (double T : maturities) {
        const auto prices = economy_bond_prices(spec, st, T, *ctx.rule);
        t.rows.push_back({st.t, T, prices.nominal.price, prices.linker.price, level});
      }
      emit(common, t);

    } else if (budget->parsed()) {
      const auto spec = cfg.economy_spec();
      for (const auto& w : spec.warnings()) std::cerr << "infokernel: warning: " << w << '\n';
      const auto report =
          evaluate_budget(spec, budget_horizon, ctx.paths, ctx.seed, budget_step.value_or(cfg.numerics.grid_step));
      emit(common, Table{{"horizon", "h0", "standard_error", "paths"},
                         {{budget_horizon, report.h0, report.standard_error, std::uint64_t{report.paths}}}});
    }
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "infokernel: config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DomainError& e) {
    std::cerr << "infokernel: domain error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const NumericalError& e) {
    std::cerr << "infokernel: numerical error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const ConsistencyError& e) {
    std::cerr << "infokernel: consistency error: " << e.what() << '\n';
    return kExitDomain;
  }
}

// twosided: equilibrium, optimal pricing, sweeps and sensitivities from a
// scenario file.
//
//   twosided optimize --config baseline.conf --set model.capacity=2 --verify

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "twosided/equilibrium.hpp"
#include "twosided/errors.hpp"
#include "twosided/experiments.hpp"
#include "twosided/objectives.hpp"
#include "twosided/optimize.hpp"
#include "twosided/oracle.hpp"
#include "twosided/sensitivity.hpp"

namespace {

using namespace twosided;

enum Exit { kOk = 0, kConfig = 1, kNumerical = 2, kMismatch = 3 };

struct Common {
  std::string config;
  std::vector<std::string> sets;
  bool verify = false;
  std::string out;
  int threads = 0;
};

ScenarioConfig load_config(const Common& opts) {
  ScenarioConfig cfg = opts.config.empty() ? ScenarioConfig{} : ScenarioConfig::load(opts.config);
  for (const std::string& s : opts.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + s + "'");
    cfg.set(s.substr(0, eq), s.substr(eq + 1));
  }
  if (opts.verify) cfg.verify = true;
  if (!opts.out.empty()) cfg.output_path = opts.out;
  if (opts.threads > 0) cfg.threads = static_cast<unsigned>(opts.threads);
  return cfg;
}

// Small CSV table for the non-sweep subcommands.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void write(std::ostream& out) const {
    auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out << ',';
        const std::string& c = cells[i];
        if (c.find_first_of(",\"\n") != std::string::npos) {
          out << '"';
          for (char ch : c) {
            if (ch == '"') out << '"';
            out << ch;
          }
          out << '"';
        } else {
          out << c;
        }
      }
      out << '\n';
    };
    line(header);
    for (const auto& r : rows) line(r);
  }
};

std::string num(double x) { return format_number(x); }

void emit(const std::string& path, const std::function<void(std::ostream&)>& body) {
  if (path.empty() || path == "-") {
    body(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  body(f);
  f.flush();
  if (!f) throw std::runtime_error("write failed for '" + path + "'");
}

int run_solve(const Common& opts) {
  const ScenarioConfig cfg = load_config(opts);
  const MarketModel model = cfg.model.build();
  const double p = cfg.prices.user;
  const double q = cfg.prices.cp;
  const Equilibrium eq = solve_equilibrium(model, p, q);

  Table t;
  t.header = {"user_price", "cp_price", "user_demand", "cp_demand", "congestion",
              "throughput", "elasticity", "gap_residual", "iterations"};
  t.rows.push_back({num(p), num(q), num(eq.user_demand), num(eq.cp_demand), num(eq.congestion),
                    num(eq.throughput), num(eq.elasticity), num(eq.gap_residual),
                    std::to_string(eq.iterations)});

  int code = kOk;
  if (cfg.verify) {
    const double reference = oracle::fixed_point_equilibrium(model, p, q);
    const double gap = std::abs(reference - eq.congestion);
    const double allowed = 1e-10 * std::max(1.0, eq.congestion);
    std::fprintf(stderr, "verify: fixed-point congestion %.12g, discrepancy %.3g (allowed %.3g)\n",
                 reference, gap, allowed);
    if (gap > allowed) code = kMismatch;
  }
  emit(cfg.output_path, [&](std::ostream& o) { t.write(o); });
  return code;
}

int run_optimize(const Common& opts) {
  const ScenarioConfig cfg = load_config(opts);
  const MarketModel model = cfg.model.build();
  const GrowthRates g = growth_rates(model);

  Table t;
  t.header = {"kind", "user_price", "cp_price", "objective", "congestion", "throughput",
              "elasticity", "kkt_residual", "lerner_residual", "ramsey_residual", "interior",
              "growth_rate"};
  auto add = [&](const OptimumReport& r, double growth) {
    const OptimumDiagnostics& d = r.diagnostics;
    t.rows.push_back({to_string(r.kind), num(r.prices.user), num(r.prices.cp), num(r.objective),
                      num(r.equilibrium.congestion), num(r.equilibrium.throughput),
                      num(r.equilibrium.elasticity), num(d.kkt_residual), num(d.lerner_residual),
                      num(d.ramsey_residual), d.interior ? "1" : "0", num(growth)});
  };
  add(g.profit_two_sided, g.profit);
  add(g.profit_one_sided, 0.0);
  add(g.welfare_two_sided, g.welfare);
  add(g.welfare_one_sided, 0.0);

  int code = kOk;
  if (cfg.verify) {
    for (const OptimumReport* r : {&g.profit_two_sided, &g.welfare_two_sided}) {
      const VerifyResult v = verify_optimum(model, *r, cfg.verify_points, cfg.threads);
      std::fprintf(stderr, "verify %s: %.3g cells, shortfall %.3g\n", to_string(r->kind).c_str(),
                   v.cell_discrepancy, v.value_shortfall);
      if (!v.ok()) code = kMismatch;
    }
  }
  emit(cfg.output_path, [&](std::ostream& o) { t.write(o); });
  return code;
}

int run_sweep_cmd(const Common& opts) {
  const ScenarioConfig cfg = load_config(opts);
  if (!cfg.sweep) throw ConfigError("sweep: no sweep.parameter in config");
  const SweepResult result =
      cfg.sweep->kind == SweepKind::Growth ? run_sweep(cfg) : price_trend_sweep(cfg);

  int failed = 0;
  for (const SweepRow& row : result.rows) failed += row.ok() ? 0 : 1;

  int code = kOk;
  if (cfg.verify) {
    double worst_cells = 0.0;
    double worst_shortfall = 0.0;
    bool ok = true;
    for (const SweepRow& row : result.rows) {
      if (!row.ok()) continue;
      const MarketModel model =
          with_parameter(cfg.model.build(), cfg.sweep->parameter, row.param_value);
      OptimumReport profit;
      profit.kind = OptimumKind::ProfitTwoSided;
      profit.prices = {row.p_star, row.q_star};
      profit.objective = twosided::profit(model, row.p_star, row.q_star);
      OptimumReport welfare;
      welfare.kind = OptimumKind::WelfareTwoSided;
      welfare.prices = {row.p_circ, row.q_circ};
      const ObjectiveReport at = evaluate(model, row.p_circ, row.q_circ);
      welfare.objective = at.user_welfare + at.cp_welfare;
      for (const OptimumReport* r : {&profit, &welfare}) {
        const VerifyResult v = verify_optimum(model, *r, cfg.verify_points, cfg.threads);
        worst_cells = std::max(worst_cells, v.cell_discrepancy);
        worst_shortfall = std::max(worst_shortfall, v.value_shortfall);
        ok = ok && v.ok();
      }
    }
    std::fprintf(stderr, "verify: max %.3g cells, max shortfall %.3g over %zu rows\n",
                 worst_cells, worst_shortfall, result.rows.size());
    if (!ok) code = kMismatch;
  }
  if (cfg.output_path.empty() || cfg.output_path == "-") {
    write_csv(result, std::cout);
  } else {
    emit_csv(result, cfg.output_path);
  }
  if (failed > 0) {
    std::fprintf(stderr, "%d of %zu rows failed, see status column\n", failed,
                 result.rows.size());
    if (code == kOk) code = kNumerical;
  }
  return code;
}

int run_sensitivity(const Common& opts) {
  const ScenarioConfig cfg = load_config(opts);
  const MarketModel model = cfg.model.build();

  std::vector<SensitivityReport> reports(cfg.sensitivity_parameters.size());
  for (std::size_t i = 0; i < reports.size(); ++i) {
    reports[i] = optimal_price_sensitivity(model, cfg.sensitivity_parameters[i],
                                           cfg.sensitivity_step);
  }

  Table t;
  t.header = {"parameter", "base_value", "step", "dp_star", "dq_star", "dp_circ", "dq_circ",
              "eps_slope_star", "eps_slope_circ", "rule", "expected", "observed", "applicable",
              "conclusive", "holds"};
  bool all_hold = true;
  for (const SensitivityReport& r : reports) {
    const std::vector<std::string> lead = {
        to_string(r.parameter),           num(r.base_value),
        num(r.step),                      num(r.profit_slopes.user),
        num(r.profit_slopes.cp),          num(r.welfare_slopes.user),
        num(r.welfare_slopes.cp),         num(r.profit_context.elasticity_slope),
        num(r.welfare_context.elasticity_slope)};
    for (const SignCheck& s : r.signs) {
      auto row = lead;
      row.insert(row.end(), {s.rule, std::to_string(s.expected), std::to_string(s.observed),
                             s.applicable ? "1" : "0", s.conclusive ? "1" : "0",
                             s.holds() ? "1" : "0"});
      t.rows.push_back(std::move(row));
    }
    for (const RatioCheck& c : r.ratios) {
      auto row = lead;
      const bool holds = c.holds(1e-2);
      row.insert(row.end(), {c.rule, num(c.predicted), num(c.observed), c.applicable ? "1" : "0",
                             "1", holds ? "1" : "0"});
      t.rows.push_back(std::move(row));
    }
    all_hold = all_hold && r.all_hold(1e-2);
  }
  emit(cfg.output_path, [&](std::ostream& o) { t.write(o); });
  if (cfg.verify && !all_hold) {
    std::fprintf(stderr, "verify: at least one applicable rule does not hold\n");
    return kMismatch;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-sided pricing on a congested network"};
  app.require_subcommand(1);

  Common opts;
  auto attach = [&](CLI::App* sub) {
    sub->add_option("--config", opts.config, "scenario file");
    sub->add_option("--set", opts.sets, "override, key=value (repeatable)")->take_all();
    sub->add_flag("--verify", opts.verify, "compare against the reference oracles");
    sub->add_option("--out", opts.out, "CSV output path (default stdout)");
    sub->add_option("--threads", opts.threads, "worker threads")->check(CLI::PositiveNumber);
  };
  CLI::App* solve = app.add_subcommand("solve-eq", "equilibrium at prices.user, prices.cp");
  CLI::App* optimize = app.add_subcommand("optimize", "profit and welfare optima, growth rates");
  CLI::App* sweep = app.add_subcommand("sweep", "growth-rate or price-trend sweep");
  CLI::App* sens = app.add_subcommand("sensitivity", "optimal-price sensitivities");
  for (CLI::App* sub : {solve, optimize, sweep, sens}) attach(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfig;
  }

  try {
    if (solve->parsed()) return run_solve(opts);
    if (optimize->parsed()) return run_optimize(opts);
    if (sweep->parsed()) return run_sweep_cmd(opts);
    return run_sensitivity(opts);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfig;
  } catch (const std::domain_error& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return kNumerical;
  } catch (const BracketError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return kNumerical;
  } catch (const ConvergenceError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return kNumerical;
  } catch (const DegenerateError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return kNumerical;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kConfig;
  }
}

#pragma once

#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "twosided/optimize.hpp"
#include "twosided/parameter.hpp"
#include "twosided/primitives.hpp"

namespace twosided {

/// Builtin-family model description as it appears in a scenario file.
/// The Exponential gain with s = e - 1 realizes rho = exp(-phi).
struct ModelSpec {
  std::string congestion = "sharing";  ///< sharing | mm1
  std::string gain = "reciprocal";     ///< reciprocal | exponential
  double alpha = 1.0;
  double beta = 1.0;
  double cost = 0.7;
  double capacity = 1.0;
  double sensitivity = 1.0;

  MarketModel build() const;
};

enum class SweepKind { Growth, Prices };

struct SweepSpec {
  Parameter parameter = Parameter::Alpha;
  double start = 0.5;
  double stop = 3.0;
  int count = 26;
  SweepKind kind = SweepKind::Growth;

  /// `count` evenly spaced values from start to stop inclusive.
  std::vector<double> values() const;
};

/// Parsed scenario file.
///
/// Grammar, one entry per line:
///
///     # comment
///     section.key = value
///
/// Keys:
///   model.congestion, model.gain, model.user_demand.alpha,
///   model.cp_demand.beta, model.cost, model.capacity, model.sensitivity
///   prices.user, prices.cp                      (solve-eq)
///   sweep.parameter, sweep.range = start:stop:count, sweep.kind
///   sensitivity.parameters = capacity,sensitivity   sensitivity.step
///   output.path, verify.enabled, verify.points, run.threads
///
/// A key may appear once per file; `set` overrides are applied afterwards.
struct ScenarioConfig {
  ModelSpec model;
  PricePair prices{0.3, 0.3};
  std::optional<SweepSpec> sweep;
  std::vector<Parameter> sensitivity_parameters{Parameter::Capacity, Parameter::Sensitivity};
  double sensitivity_step = 1e-3;
  std::string output_path;
  bool verify = false;
  int verify_points = 2001;
  unsigned threads = 1;

  /// Throws ConfigError with the offending line number.
  static ScenarioConfig parse(std::string_view text, std::string_view origin = "<string>");
  static ScenarioConfig load(const std::string& path);

  /// Applies one `key = value` assignment. Throws ConfigError.
  void set(std::string_view key, std::string_view value);
};

/// One sweep row. Fields not computed for the sweep kind stay NaN; a row
/// whose optimization failed carries the error in `status`.
struct SweepRow {
  static constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  double param_value = 0.0;
  double p_star = nan, q_star = nan;
  double u_two = nan, u_one = nan, r_star = nan;
  double p_circ = nan, q_circ = nan;
  double w_two = nan, w_one = nan, r_circ = nan;
  double phi_star = nan, phi_circ = nan;
  double eps_star = nan, eps_circ = nan;
  std::string status = "ok";

  bool ok() const { return status == "ok"; }
};

struct SweepResult {
  Parameter parameter = Parameter::Alpha;
  SweepKind kind = SweepKind::Growth;
  std::vector<SweepRow> rows;  ///< in parameter order

  std::vector<std::string> columns() const;
};

/// Growth-rate sweep: for every grid value all four optima and r*, r°.
/// Rows are independent and may run on config.threads workers.
SweepResult run_sweep(const ScenarioConfig& config);

/// Two-sided profit and welfare prices only.
SweepResult price_trend_sweep(const ScenarioConfig& config);

/// Comma-separated table, header row, %.12g numbers, LF line endings.
void write_csv(const SweepResult& result, std::ostream& out);
/// Throws std::runtime_error naming the path when the file cannot be written.
void emit_csv(const SweepResult& result, const std::string& path);
/// Inverse of write_csv.
SweepResult read_csv(std::istream& in);

std::string format_number(double value);

/// Distance between an optimizer result and the dense-grid oracle.
struct VerifyResult {
  double cell_discrepancy = 0.0;  ///< max price gap in grid cells
  double value_shortfall = 0.0;   ///< oracle value minus optimizer value
  bool ok() const { return cell_discrepancy <= 1.0 && value_shortfall <= 1e-8; }
};

/// ProfitTwoSided and WelfareTwoSided reports only.
VerifyResult verify_optimum(const MarketModel& model, const OptimumReport& report, int points,
                            unsigned threads = 1);

}  // namespace twosided

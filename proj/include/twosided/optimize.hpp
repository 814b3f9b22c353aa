#pragma once

#include <string>

#include "twosided/equilibrium.hpp"
#include "twosided/primitives.hpp"

namespace twosided {

enum class OptimumKind { ProfitTwoSided, WelfareTwoSided, ProfitOneSided, WelfareOneSided };

std::string to_string(OptimumKind kind);

enum class Objective { Profit, Welfare };

/// User-side price p and CP-side price q, per unit of traffic.
struct PricePair {
  double user = 0.0;
  double cp = 0.0;
};

/// Searchable price box. Each side stops 1e-9 (relative) short of its
/// support bound, where the hazard rate diverges.
struct PriceBox {
  double user_max = 1.0;
  double cp_max = 1.0;
};

PriceBox price_box(const MarketModel& model);

struct OptimumDiagnostics {
  double user_hazard = 0.0;
  double cp_hazard = 0.0;
  double elasticity = 1.0;
  /// max_i |hazard_i (p + q - c) eps - 1|; profit kinds only. The
  /// one-sided problem has the user term alone.
  double kkt_residual = 0.0;
  /// |m~ - n~| / m~; ProfitTwoSided only.
  double hazard_gap = 0.0;
  /// |(p+q-c)/(p+q) - 1/(eps (eps^m_p + eps^n_q))|; profit kinds only.
  double lerner_residual = 0.0;
  /// Cross-multiplied first-order condition of the zero-profit welfare
  /// problem, normalized by the larger hazard; WelfareTwoSided only.
  double ramsey_residual = 0.0;
  /// False when the optimum sits within 1e-6 of the price box edge; the
  /// first-order residuals carry no guarantee then.
  bool interior = true;
  int sweeps = 0;
};

struct OptimumReport {
  OptimumKind kind = OptimumKind::ProfitTwoSided;
  PricePair prices;
  /// U for profit kinds, W = W_m + W_n + U for welfare kinds.
  double objective = 0.0;
  Equilibrium equilibrium;
  OptimumDiagnostics diagnostics;
};

struct OptimizerOptions {
  int coarse_points = 101;      ///< per axis, two-sided profit grid
  int scan_points = 2001;       ///< one-dimensional scans
  double price_tolerance = 1e-9;
  int max_sweeps = 200;
};

/// Profit-maximizing (p*, q*): coarse grid, then alternating golden-section
/// refinement of p and q over shrinking local brackets.
OptimumReport optimize_profit(const MarketModel& model, const OptimizerOptions& options = {});

/// Welfare-maximizing (p°, q°) on the zero-profit line p + q = c.
OptimumReport optimize_welfare(const MarketModel& model, const OptimizerOptions& options = {});

/// One-sided benchmarks with q = 0. The welfare version has no freedom left
/// under zero profit and returns W(c, 0).
OptimumReport optimize_one_sided(const MarketModel& model, Objective objective,
                                 const OptimizerOptions& options = {});

struct GrowthRates {
  double profit = 0.0;   ///< r* = (U*_two - U*_one) / U*_one
  double welfare = 0.0;  ///< r° = (W°_two - W°_one) / W°_one
  OptimumReport profit_two_sided;
  OptimumReport profit_one_sided;
  OptimumReport welfare_two_sided;
  OptimumReport welfare_one_sided;
};

/// Throws DegenerateError when a one-sided optimum is not positive.
GrowthRates growth_rates(const MarketModel& model, const OptimizerOptions& options = {});

/// First-order diagnostics for an arbitrary price pair.
OptimumDiagnostics diagnose(const MarketModel& model, OptimumKind kind, PricePair prices);

}  // namespace twosided

#pragma once

#include <string>
#include <vector>

#include "twosided/optimize.hpp"
#include "twosided/parameter.hpp"

namespace twosided {

/// d eps / d phi along the capacity trace at fixed (p, q, s): mu is moved
/// over a 5-point stencil (relative step 1e-3), each equilibrium re-solved,
/// and the least-squares slope of eps against phi returned. This is the
/// direction in which capacity changes act on the optimal prices; it is
/// not the partial derivative at fixed mu. Throws DegenerateError when phi
/// barely moves across the stencil.
double elasticity_slope_vs_congestion(const MarketModel& model, double user_price,
                                      double cp_price);

/// A sign rule with the observed finite-difference sign.
struct SignCheck {
  std::string rule;
  int expected = 0;
  int observed = 0;
  /// False on branches the theory says nothing about; those are reported
  /// but never count as failures.
  bool applicable = true;
  /// False when a quantity the rule depends on is below 1e-6 in magnitude.
  bool conclusive = true;

  bool holds() const { return !applicable || !conclusive || expected == observed; }
};

/// dp/dx : dq/dx against the predicted ratio of opposite-side hazard slopes.
struct RatioCheck {
  std::string rule;
  double observed = 0.0;
  double predicted = 0.0;
  bool applicable = true;

  double relative_error() const;
  bool holds(double tolerance) const { return !applicable || relative_error() <= tolerance; }
};

/// Market state at one optimum.
struct OptimumContext {
  PricePair prices;
  double user_hazard = 0.0;
  double cp_hazard = 0.0;
  double user_hazard_slope = 0.0;  ///< d m~ / dp
  double cp_hazard_slope = 0.0;    ///< d n~ / dq
  double elasticity_slope = 0.0;   ///< d eps / d phi on the capacity trace
  double congestion = 0.0;         ///< equilibrium phi
  double gain_cross_slope = 0.0;   ///< d2 rho / d phi d s at phi
};

struct SensitivityReport {
  Parameter parameter = Parameter::Capacity;
  double base_value = 0.0;
  double step = 0.0;          ///< absolute step
  PricePair profit_slopes;    ///< (dp*/dx, dq*/dx)
  PricePair welfare_slopes;   ///< (dp°/dx, dq°/dx)
  OptimumContext profit_context;
  OptimumContext welfare_context;
  std::vector<SignCheck> signs;
  std::vector<RatioCheck> ratios;

  bool all_hold(double ratio_tolerance = 1e-2) const;
};

/// Central differences of re-optimized prices at x (1 +- relative_step),
/// with the capacity and sensitivity corollaries evaluated against them.
SensitivityReport optimal_price_sensitivity(const MarketModel& model, Parameter parameter,
                                            double relative_step = 1e-3,
                                            const OptimizerOptions& options = {});

}  // namespace twosided

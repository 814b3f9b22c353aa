#pragma once

#include "twosided/equilibrium.hpp"
#include "twosided/primitives.hpp"

namespace twosided {

struct ObjectiveGradients {
  double profit_p = 0.0;    ///< dU/dp
  double profit_q = 0.0;    ///< dU/dq
  double profit_mu = 0.0;   ///< dU/dmu
  double welfare_p = 0.0;   ///< dW/dp, W including the provider's profit
  double welfare_q = 0.0;   ///< dW/dq
  double welfare_mu = 0.0;  ///< dW/dmu
  /// Gradients of the consumer-side welfare W_m + W_n, the quantity the
  /// zero-profit welfare problem maximizes. Equal to welfare_p/welfare_q
  /// whenever p + q = c.
  double surplus_p = 0.0;
  double surplus_q = 0.0;
};

/// Profit, welfare and their price/capacity gradients at one price pair.
struct ObjectiveReport {
  double profit = 0.0;        ///< U = (p + q - c) lambda
  double user_welfare = 0.0;  ///< W_m = s_m(p) lambda
  double cp_welfare = 0.0;    ///< W_n = s_n(q) lambda
  double welfare = 0.0;       ///< W = W_m + W_n + U
  ObjectiveGradients gradients;

  double user_hazard = 0.0;        ///< hazard of m at p
  double cp_hazard = 0.0;          ///< hazard of n at q
  double user_unit_surplus = 0.0;  ///< s_m(p)
  double cp_unit_surplus = 0.0;    ///< s_n(q)
  double gain_hazard = 0.0;        ///< |d rho/d phi| / rho
  Equilibrium equilibrium;
  /// Zero demand on a side: every objective and gradient is zero.
  bool degenerate = false;
};

ObjectiveReport evaluate(const MarketModel& model, double user_price, double cp_price);

/// Scalar shortcuts used inside search loops.
double profit(const MarketModel& model, double user_price, double cp_price);
/// W_m + W_n + U.
double welfare(const MarketModel& model, double user_price, double cp_price);

}  // namespace twosided

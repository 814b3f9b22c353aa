#pragma once

#include "twosided/primitives.hpp"

namespace twosided {

/// Solved congestion fixed point of a system (m, n, mu, s).
struct Equilibrium {
  double congestion = 0.0;   ///< phi
  double throughput = 0.0;   ///< lambda = Lambda(phi, mu)
  double elasticity = 1.0;   ///< elasticity of system throughput, in (0, 1]
  double gap_residual = 0.0; ///< |Lambda(phi, mu) - m n rho(phi, s)|
  int iterations = 0;
  bool degenerate = false;   ///< zero demand on one side

  // Inputs. Prices are NaN when the system was solved from raw demand.
  double user_price = 0.0;
  double cp_price = 0.0;
  double user_demand = 0.0;  ///< m
  double cp_demand = 0.0;    ///< n
  double capacity = 0.0;
  double sensitivity = 0.0;
};

/// Unique root of g(phi) = Lambda(phi, mu) - m(p) n(q) rho(phi, s) above the
/// congestion floor, by geometric bracketing then bisection to full double
/// precision. Zero demand on either side yields the degenerate equilibrium
/// phi = Phi(0, mu), lambda = 0. Throws BracketError when g never turns
/// positive (a custom curve breaks the monotonicity assumptions).
Equilibrium solve_equilibrium(const MarketModel& model, double user_price, double cp_price);

/// Same fixed point parameterized directly by the demand levels m and n.
Equilibrium solve_for_demand(const MarketModel& model, double user_demand, double cp_demand);

/// (1 + m n |d rho/d phi| / (d Lambda/d phi))^-1 at eq.congestion.
double throughput_elasticity(const MarketModel& model, const Equilibrium& eq);

/// d g / d phi = d Lambda/d phi - m n d rho/d phi, strictly positive.
double gap_slope(const MarketModel& model, const Equilibrium& eq);

/// An analytic derivative together with the sign the theory predicts for it.
struct SignedDerivative {
  double value = 0.0;
  int predicted_sign = 0;

  bool sign_holds() const {
    return predicted_sign == 0 || (predicted_sign > 0 ? value > 0.0 : value < 0.0);
  }
};

/// Responses of congestion and throughput to m, n, mu and the two prices.
struct ComparativeStatics {
  SignedDerivative dphi_dm, dlambda_dm;
  SignedDerivative dphi_dn, dlambda_dn;
  SignedDerivative dphi_dmu, dlambda_dmu;
  SignedDerivative dphi_dp, dlambda_dp;
  SignedDerivative dphi_dq, dlambda_dq;
  Equilibrium equilibrium;

  /// (m / lambda) d lambda / d m.
  double elasticity_m() const;
  /// (n / lambda) d lambda / d n.
  double elasticity_n() const;
  /// |p / lambda * d lambda / d p|.
  double elasticity_p() const;
  /// |q / lambda * d lambda / d q|.
  double elasticity_q() const;
  bool all_signs_hold() const;
};

/// Closed-form statics at the equilibrium for interior prices (p, q).
ComparativeStatics comparative_statics(const MarketModel& model, double user_price,
                                       double cp_price);

}  // namespace twosided

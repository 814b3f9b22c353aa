#include "twosided/objectives.hpp"

#include <cmath>

namespace twosided {

ObjectiveReport evaluate(const MarketModel& model, double p, double q) {
  ObjectiveReport r;
  r.equilibrium = solve_equilibrium(model, p, q);
  const Equilibrium& eq = r.equilibrium;
  if (eq.degenerate) {
    r.degenerate = true;
    return r;
  }

  const double lambda = eq.throughput;
  const double margin = p + q - model.cost;
  const double eps = eq.elasticity;

  r.user_hazard = model.user_demand.hazard(p);
  r.cp_hazard = model.cp_demand.hazard(q);
  r.user_unit_surplus = model.user_demand.per_unit_surplus(p);
  r.cp_unit_surplus = model.cp_demand.per_unit_surplus(q);
  r.gain_hazard = model.gain.hazard(eq.congestion, eq.sensitivity);

  r.profit = margin * lambda;
  r.user_welfare = r.user_unit_surplus * lambda;
  r.cp_welfare = r.cp_unit_surplus * lambda;
  r.welfare = r.user_welfare + r.cp_welfare + r.profit;

  const double supply_mu = model.congestion.throughput_slope_mu(eq.congestion, eq.capacity);
  const double surplus_welfare = r.user_welfare + r.cp_welfare;

  ObjectiveGradients& g = r.gradients;
  g.profit_p = lambda - margin * eps * lambda * r.user_hazard;
  g.profit_q = lambda - margin * eps * lambda * r.cp_hazard;
  g.profit_mu = margin * supply_mu * (1.0 - eps);
  g.surplus_p = -lambda - r.user_hazard * (r.cp_welfare - surplus_welfare * (1.0 - eps));
  g.surplus_q = -lambda - r.cp_hazard * (r.user_welfare - surplus_welfare * (1.0 - eps));
  g.welfare_p = g.surplus_p + g.profit_p;
  g.welfare_q = g.surplus_q + g.profit_q;
  // (s_m + s_n + p + q - c) is price-only, so W scales with lambda along mu.
  g.welfare_mu = r.welfare * r.gain_hazard * supply_mu / gap_slope(model, eq);
  return r;
}

double profit(const MarketModel& model, double p, double q) {
  const Equilibrium eq = solve_equilibrium(model, p, q);
  return (p + q - model.cost) * eq.throughput;
}

double welfare(const MarketModel& model, double p, double q) {
  const Equilibrium eq = solve_equilibrium(model, p, q);
  if (eq.degenerate) return 0.0;
  const double unit = model.user_demand.per_unit_surplus(p) +
                      model.cp_demand.per_unit_surplus(q) + (p + q - model.cost);
  return unit * eq.throughput;
}

}  // namespace twosided

#include "twosided/equilibrium.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "twosided/errors.hpp"

namespace twosided {

namespace {

constexpr double kFloorOffset = 1e-14;
constexpr int kMaxDoublings = 200;

Equilibrium degenerate_equilibrium(const MarketModel& model, double m, double n) {
  Equilibrium eq;
  eq.congestion = model.congestion.floor(model.capacity);
  eq.throughput = 0.0;
  eq.degenerate = true;
  eq.user_demand = m;
  eq.cp_demand = n;
  eq.capacity = model.capacity;
  eq.sensitivity = model.sensitivity;
  eq.elasticity = 1.0;
  return eq;
}

}  // namespace

Equilibrium solve_for_demand(const MarketModel& model, double m, double n) {
  if (!(model.capacity > 0.0)) throw DomainError("equilibrium: capacity must be > 0");
  if (!(model.sensitivity > 0.0)) throw DomainError("equilibrium: sensitivity must be > 0");
  if (!(m >= 0.0) || !(n >= 0.0)) throw DomainError("equilibrium: demand must be >= 0");
  if (m == 0.0 || n == 0.0) return degenerate_equilibrium(model, m, n);

  const double mu = model.capacity;
  const double s = model.sensitivity;
  const double mn = m * n;
  const auto gap = [&](double phi) {
    return model.congestion.throughput(phi, mu) - mn * model.gain.value(phi, s);
  };

  const double floor = model.congestion.floor(mu);
  double lo = floor + kFloorOffset;
  double hi = std::max(2.0 * lo, 1.0);
  int iterations = 0;
  int doublings = 0;
  while (gap(hi) <= 0.0) {
    lo = hi;
    hi *= 2.0;
    ++iterations;
    if (++doublings > kMaxDoublings) {
      throw BracketError("equilibrium: gap stayed non-positive up to phi = " + std::to_string(hi));
    }
  }

  // g is increasing, so bisection keeps g(lo) <= 0 < g(hi). Run until lo
  // and hi are adjacent doubles; the light-load M/M/1 branch needs it.
  while (true) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    ++iterations;
    if (gap(mid) <= 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double phi = std::abs(gap(lo)) <= std::abs(gap(hi)) ? lo : hi;

  Equilibrium eq;
  eq.congestion = phi;
  eq.throughput = model.congestion.throughput(phi, mu);
  eq.gap_residual = std::abs(eq.throughput - mn * model.gain.value(phi, s));
  eq.iterations = iterations;
  eq.user_demand = m;
  eq.cp_demand = n;
  eq.capacity = mu;
  eq.sensitivity = s;
  eq.user_price = std::numeric_limits<double>::quiet_NaN();
  eq.cp_price = std::numeric_limits<double>::quiet_NaN();
  eq.elasticity = throughput_elasticity(model, eq);
  return eq;
}

Equilibrium solve_equilibrium(const MarketModel& model, double user_price, double cp_price) {
  Equilibrium eq = solve_for_demand(model, model.user_demand.value(user_price),
                                    model.cp_demand.value(cp_price));
  eq.user_price = user_price;
  eq.cp_price = cp_price;
  return eq;
}

double throughput_elasticity(const MarketModel& model, const Equilibrium& eq) {
  if (eq.degenerate) return 1.0;
  const double supply = model.congestion.throughput_slope_phi(eq.congestion, eq.capacity);
  const double demand = eq.user_demand * eq.cp_demand *
                        std::abs(model.gain.slope(eq.congestion, eq.sensitivity));
  return 1.0 / (1.0 + demand / supply);
}

double gap_slope(const MarketModel& model, const Equilibrium& eq) {
  return model.congestion.throughput_slope_phi(eq.congestion, eq.capacity) -
         eq.user_demand * eq.cp_demand * model.gain.slope(eq.congestion, eq.sensitivity);
}

double ComparativeStatics::elasticity_m() const {
  return equilibrium.user_demand / equilibrium.throughput * dlambda_dm.value;
}

double ComparativeStatics::elasticity_n() const {
  return equilibrium.cp_demand / equilibrium.throughput * dlambda_dn.value;
}

double ComparativeStatics::elasticity_p() const {
  return std::abs(equilibrium.user_price / equilibrium.throughput * dlambda_dp.value);
}

double ComparativeStatics::elasticity_q() const {
  return std::abs(equilibrium.cp_price / equilibrium.throughput * dlambda_dq.value);
}

bool ComparativeStatics::all_signs_hold() const {
  for (const auto* d : {&dphi_dm, &dlambda_dm, &dphi_dn, &dlambda_dn, &dphi_dmu, &dlambda_dmu,
                        &dphi_dp, &dlambda_dp, &dphi_dq, &dlambda_dq}) {
    if (!d->sign_holds()) return false;
  }
  return true;
}

ComparativeStatics comparative_statics(const MarketModel& model, double p, double q) {
  ComparativeStatics out;
  out.equilibrium = solve_equilibrium(model, p, q);
  const Equilibrium& eq = out.equilibrium;
  if (eq.degenerate) {
    throw DomainError("comparative statics: zero demand at the given prices");
  }

  const double phi = eq.congestion;
  const double mu = eq.capacity;
  const double m = eq.user_demand;
  const double n = eq.cp_demand;
  const double lambda = eq.throughput;
  const double g_phi = gap_slope(model, eq);
  const double supply_phi = model.congestion.throughput_slope_phi(phi, mu);
  const double supply_mu = model.congestion.throughput_slope_mu(phi, mu);
  const double rho_phi = model.gain.slope(phi, eq.sensitivity);

  out.dphi_dm = {lambda / (m * g_phi), +1};
  out.dlambda_dm = {supply_phi * out.dphi_dm.value, +1};
  out.dphi_dn = {lambda / (n * g_phi), +1};
  out.dlambda_dn = {supply_phi * out.dphi_dn.value, +1};
  out.dphi_dmu = {-supply_mu / g_phi, -1};
  out.dlambda_dmu = {m * n * rho_phi * out.dphi_dmu.value, +1};
  out.dphi_dp = {-lambda * model.user_demand.hazard(p) / g_phi, -1};
  out.dlambda_dp = {supply_phi * out.dphi_dp.value, -1};
  out.dphi_dq = {-lambda * model.cp_demand.hazard(q) / g_phi, -1};
  out.dlambda_dq = {supply_phi * out.dphi_dq.value, -1};
  return out;
}

}  // namespace twosided

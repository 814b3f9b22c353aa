#include "twosided/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "twosided/detail/numeric.hpp"
#include "twosided/equilibrium.hpp"
#include "twosided/errors.hpp"

namespace twosided::oracle {

namespace {

struct Candidate {
  double p = 0.0;
  double q = 0.0;
  double value = -std::numeric_limits<double>::infinity();
};

double objective_at(const MarketModel& model, GridObjective objective, double p, double q) {
  const Equilibrium eq = solve_equilibrium(model, p, q);
  if (eq.degenerate) return 0.0;
  if (objective == GridObjective::Profit) return (p + q - model.cost) * eq.throughput;
  const double sm = model.user_demand.surplus(p) / eq.user_demand;
  const double sn = model.cp_demand.surplus(q) / eq.cp_demand;
  return (sm + sn) * eq.throughput;
}

double node(double lo, double hi, int i, int points) {
  return lo + (hi - lo) * i / (points - 1);
}

}  // namespace

GridOptimum grid_optimize(const MarketModel& model, GridObjective objective,
                          const GridSpec& grid) {
  if (grid.points < 3) throw DomainError("grid oracle: need at least 3 points per axis");
  const PriceBox box = price_box(model);
  const int n = grid.points;
  GridOptimum out;

  if (objective == GridObjective::Profit) {
    const double ulo = grid.user_lo.value_or(0.0);
    const double uhi = grid.user_hi.value_or(box.user_max);
    const double clo = grid.cp_lo.value_or(0.0);
    const double chi = grid.cp_hi.value_or(box.cp_max);
    std::vector<Candidate> rows(static_cast<std::size_t>(n));
    detail::parallel_for(rows.size(), grid.threads, [&](std::size_t i) {
      Candidate best;
      const double p = node(ulo, uhi, static_cast<int>(i), n);
      for (int j = 0; j < n; ++j) {
        const double q = node(clo, chi, j, n);
        const double v = objective_at(model, objective, p, q);
        if (v > best.value) best = {p, q, v};
      }
      rows[i] = best;
    });
    Candidate best;
    for (const Candidate& c : rows) {
      if (c.value > best.value) best = c;
    }
    out.prices = {best.p, best.q};
    out.value = best.value;
    out.user_cell = (uhi - ulo) / (n - 1);
    out.cp_cell = (chi - clo) / (n - 1);
    return out;
  }

  const double c = model.cost;
  const double ulo = grid.user_lo.value_or(std::max(0.0, c - box.cp_max));
  const double uhi = grid.user_hi.value_or(std::min(c, box.user_max));
  Candidate best;
  for (int i = 0; i < n; ++i) {
    const double p = node(ulo, uhi, i, n);
    const double v = objective_at(model, objective, p, c - p);
    if (v > best.value) best = {p, c - p, v};
  }
  out.prices = {best.p, best.q};
  out.value = best.value;
  out.user_cell = (uhi - ulo) / (n - 1);
  return out;
}

GridOptimum grid_optimize_one_sided(const MarketModel& model, int points) {
  if (points < 3) throw DomainError("grid oracle: need at least 3 points");
  const double hi = price_box(model).user_max;
  Candidate best;
  for (int i = 0; i < points; ++i) {
    const double p = node(0.0, hi, i, points);
    const double v = objective_at(model, GridObjective::Profit, p, 0.0);
    if (v > best.value) best = {p, 0.0, v};
  }
  GridOptimum out;
  out.prices = {best.p, 0.0};
  out.value = best.value;
  out.user_cell = hi / (points - 1);
  return out;
}

double fixed_point_for_demand(const MarketModel& model, double m, double n,
                              const FixedPointOptions& options) {
  const double mu = model.capacity;
  const double s = model.sensitivity;
  const CongestionCurve& curve = model.congestion;
  const double floor = curve.floor(mu);
  if (m * n == 0.0) return floor;

  double phi = options.start.value_or(floor + 1e-6);
  const double t = options.damping;
  for (int k = 0; k < options.max_iterations; ++k) {
    const double demand = m * n * model.gain.value(phi, s);
    double step;
    if (curve.admits(demand, mu)) {
      step = t * (curve.congestion(demand, mu) - phi);
    } else {
      // Load beyond the domain of Phi: congestion must rise. Push upward
      // and let the next iterate see a smaller demand.
      step = std::max(phi, 1.0);
    }
    double next = phi + step;
    while (next < floor) {
      step *= 0.5;
      next = phi + step;
    }
    if (std::abs(next - phi) <= options.tolerance * std::max(1.0, phi)) return next;
    phi = next;
  }
  throw ConvergenceError("fixed-point equilibrium: no convergence after " +
                         std::to_string(options.max_iterations) + " iterations");
}

double fixed_point_equilibrium(const MarketModel& model, double p, double q,
                               const FixedPointOptions& options) {
  return fixed_point_for_demand(model, model.user_demand.value(p), model.cp_demand.value(q),
                                options);
}

double finite_difference(const std::function<double(double)>& f, double x,
                         const StepPolicy& policy) {
  const double h = policy.relative_step * std::max(1.0, std::abs(x));
  if (policy.five_point) {
    return (-f(x + 2.0 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2.0 * h)) / (12.0 * h);
  }
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

}  // namespace twosided::oracle

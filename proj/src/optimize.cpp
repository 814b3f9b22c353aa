#include "twosided/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <utility>

#include "twosided/detail/numeric.hpp"
#include "twosided/errors.hpp"
#include "twosided/objectives.hpp"

namespace twosided {

namespace {

constexpr double kSupportMargin = 1e-9;
constexpr double kBoundaryBand = 1e-6;
constexpr double kLineTolerance = 1e-10;
constexpr double kFlatTolerance = 1e-10;
constexpr double kPolishReach = 1e-5;

// W_m + W_n. On the zero-profit line this is the full welfare without the
// roundoff of (p + q - c).
double surplus_welfare(const MarketModel& model, double p, double q) {
  const Equilibrium eq = solve_equilibrium(model, p, q);
  if (eq.degenerate) return 0.0;
  return (model.user_demand.per_unit_surplus(p) + model.cp_demand.per_unit_surplus(q)) *
         eq.throughput;
}

// Evaluates f on `points` uniform nodes of [lo, hi]; returns the first
// (smallest) maximizer.
template <class F>
detail::ScalarMax scan(const F& f, double lo, double hi, int points) {
  detail::ScalarMax best{lo, -std::numeric_limits<double>::infinity()};
  for (int i = 0; i < points; ++i) {
    const double x = points == 1 ? lo : lo + (hi - lo) * i / (points - 1);
    const double v = f(x);
    if (v > best.value) best = {x, v};
  }
  return best;
}

template <class F>
detail::ScalarMax scan_and_refine(const F& f, double lo, double hi, int points, double tol) {
  const detail::ScalarMax coarse = scan(f, lo, hi, points);
  const double cell = points > 1 ? (hi - lo) / (points - 1) : 0.0;
  const double a = std::max(lo, coarse.x - cell);
  const double b = std::min(hi, coarse.x + cell);
  if (!(b > a)) return coarse;
  const detail::ScalarMax fine = detail::golden_section_max(f, a, b, tol);
  return fine.value >= coarse.value ? fine : coarse;
}

// Gradient roots are far sharper than objective comparisons near a flat
// maximum. Polished points are kept only if the objective agrees.
bool flat_enough(double candidate, double incumbent) {
  return candidate >= incumbent - kFlatTolerance * std::max(1.0, std::abs(incumbent));
}

// Root of a one-dimensional derivative inside the final refinement bracket.
template <class F, class D>
detail::ScalarMax polish_1d(const F& f, const D& slope, detail::ScalarMax best, double lo,
                            double hi, double cell) {
  const double a = std::max(lo, best.x - cell);
  const double b = std::min(hi, best.x + cell);
  if (!(b > a)) return best;
  const std::optional<double> root = detail::bisect_root(slope, a, b);
  if (!root) return best;
  const double v = f(*root);
  if (!flat_enough(v, best.value)) return best;
  return {*root, v};
}

// Newton on the analytic profit gradient with a differenced Jacobian.
PricePair polish_profit(const MarketModel& model, PricePair start, const PriceBox& box) {
  const auto grad = [&](double p, double q) {
    const ObjectiveGradients g = evaluate(model, p, q).gradients;
    return std::pair{g.profit_p, g.profit_q};
  };
  PricePair x = start;
  auto [gp, gq] = grad(x.user, x.cp);
  for (int it = 0; it < 12; ++it) {
    const double hp = 1e-6 * std::max(1.0, x.user);
    const double hq = 1e-6 * std::max(1.0, x.cp);
    if (x.user - hp < 0.0 || x.user + hp > box.user_max || x.cp - hq < 0.0 ||
        x.cp + hq > box.cp_max) {
      break;
    }
    const auto [pp_hi, qp_hi] = grad(x.user + hp, x.cp);
    const auto [pp_lo, qp_lo] = grad(x.user - hp, x.cp);
    const auto [pq_hi, qq_hi] = grad(x.user, x.cp + hq);
    const auto [pq_lo, qq_lo] = grad(x.user, x.cp - hq);
    const double a = (pp_hi - pp_lo) / (2.0 * hp);
    const double b = (pq_hi - pq_lo) / (2.0 * hq);
    const double c = (qp_hi - qp_lo) / (2.0 * hp);
    const double d = (qq_hi - qq_lo) / (2.0 * hq);
    const double det = a * d - b * c;
    if (!(std::abs(det) > 0.0) || !std::isfinite(det)) break;
    const double dp = -(d * gp - b * gq) / det;
    const double dq = -(a * gq - c * gp) / det;
    const PricePair next{x.user + dp, x.cp + dq};
    if (next.user <= 0.0 || next.user >= box.user_max || next.cp <= 0.0 ||
        next.cp >= box.cp_max) {
      break;
    }
    const auto [np, nq] = grad(next.user, next.cp);
    if (std::hypot(np, nq) >= std::hypot(gp, gq)) break;
    x = next;
    gp = np;
    gq = nq;
    if (std::max(std::abs(dp), std::abs(dq)) < 1e-14) break;
  }
  return x;
}

bool near_edge(double x, double hi) { return x <= kBoundaryBand || x >= hi - kBoundaryBand; }

}  // namespace

std::string to_string(OptimumKind kind) {
  switch (kind) {
    case OptimumKind::ProfitTwoSided: return "profit_two_sided";
    case OptimumKind::WelfareTwoSided: return "welfare_two_sided";
    case OptimumKind::ProfitOneSided: return "profit_one_sided";
    case OptimumKind::WelfareOneSided: return "welfare_one_sided";
  }
  return "unknown";
}

PriceBox price_box(const MarketModel& model) {
  const double pu = model.user_demand.support();
  const double pc = model.cp_demand.support();
  return {pu - kSupportMargin * pu, pc - kSupportMargin * pc};
}

OptimumDiagnostics diagnose(const MarketModel& model, OptimumKind kind, PricePair prices) {
  OptimumDiagnostics d;
  const double p = prices.user;
  const double q = prices.cp;
  const ObjectiveReport r = evaluate(model, p, q);
  if (r.degenerate) {
    d.interior = false;
    return d;
  }
  d.user_hazard = r.user_hazard;
  d.cp_hazard = r.cp_hazard;
  d.elasticity = r.equilibrium.elasticity;
  const double eps = d.elasticity;
  const double margin = p + q - model.cost;

  if (kind == OptimumKind::ProfitTwoSided || kind == OptimumKind::ProfitOneSided) {
    d.kkt_residual = std::abs(d.user_hazard * margin * eps - 1.0);
    // q is pinned at 0 on the one-sided problem; no CP-side condition.
    if (kind == OptimumKind::ProfitTwoSided) {
      d.kkt_residual = std::max(d.kkt_residual, std::abs(d.cp_hazard * margin * eps - 1.0));
      d.hazard_gap = std::abs(d.user_hazard - d.cp_hazard) / d.user_hazard;
    }
    const double total_elasticity =
        eps * (model.user_demand.elasticity(p) + model.cp_demand.elasticity(q));
    d.lerner_residual = std::abs(margin / (p + q) - 1.0 / total_elasticity);
  }
  if (kind == OptimumKind::WelfareTwoSided) {
    const double sm = r.user_unit_surplus;
    const double sn = r.cp_unit_surplus;
    const double user_term = eps - 1.0 + sn / (sm + sn);
    const double cp_term = eps - 1.0 + sm / (sm + sn);
    d.ramsey_residual = std::abs(d.user_hazard * user_term - d.cp_hazard * cp_term) /
                        std::max(d.user_hazard, d.cp_hazard);
  }
  return d;
}

OptimumReport optimize_profit(const MarketModel& model, const OptimizerOptions& options) {
  model.validate();
  const PriceBox box = price_box(model);
  const auto objective = [&](double p, double q) { return profit(model, p, q); };

  // Coarse grid; strict improvement keeps the lexicographically smallest
  // maximizer.
  const int n = std::max(3, options.coarse_points);
  double best_p = 0.0;
  double best_q = 0.0;
  double best = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    const double p = box.user_max * i / (n - 1);
    for (int j = 0; j < n; ++j) {
      const double q = box.cp_max * j / (n - 1);
      const double v = objective(p, q);
      if (v > best) {
        best = v;
        best_p = p;
        best_q = q;
      }
    }
  }

  // Alternating line maximizations over local brackets. The bracket
  // follows the last movement so a line optimum outside it is reached
  // in later sweeps.
  const double cell = std::max(box.user_max, box.cp_max) / (n - 1);
  double radius = cell;
  int sweeps = 0;
  for (; sweeps < options.max_sweeps; ++sweeps) {
    const double p0 = best_p;
    const double q0 = best_q;

    const auto along_p = [&](double p) { return objective(p, best_q); };
    const detail::ScalarMax lp = detail::golden_section_max(
        along_p, std::max(0.0, best_p - radius), std::min(box.user_max, best_p + radius),
        kLineTolerance);
    if (lp.value >= best) {
      best = lp.value;
      best_p = lp.x;
    }

    const auto along_q = [&](double q) { return objective(best_p, q); };
    const detail::ScalarMax lq = detail::golden_section_max(
        along_q, std::max(0.0, best_q - radius), std::min(box.cp_max, best_q + radius),
        kLineTolerance);
    if (lq.value >= best) {
      best = lq.value;
      best_q = lq.x;
    }

    const double movement = std::max(std::abs(best_p - p0), std::abs(best_q - q0));
    if (movement < options.price_tolerance) {
      ++sweeps;
      break;
    }
    radius = std::clamp(4.0 * movement, 1e-7, 0.25);
  }

  const PricePair polished = polish_profit(model, {best_p, best_q}, box);
  if (std::max(std::abs(polished.user - best_p), std::abs(polished.cp - best_q)) <= kPolishReach) {
    const double v = objective(polished.user, polished.cp);
    if (flat_enough(v, best)) {
      best_p = polished.user;
      best_q = polished.cp;
      best = v;
    }
  }

  OptimumReport report;
  report.kind = OptimumKind::ProfitTwoSided;
  report.prices = {best_p, best_q};
  report.objective = best;
  report.equilibrium = solve_equilibrium(model, best_p, best_q);
  report.diagnostics = diagnose(model, report.kind, report.prices);
  report.diagnostics.sweeps = sweeps;
  if (near_edge(best_p, box.user_max) || near_edge(best_q, box.cp_max)) {
    report.diagnostics.interior = false;
  }
  return report;
}

OptimumReport optimize_welfare(const MarketModel& model, const OptimizerOptions& options) {
  model.validate();
  const PriceBox box = price_box(model);
  const double c = model.cost;
  if (!(c > 0.0)) throw DomainError("welfare optimum: cost must be > 0");

  const double lo = std::max(0.0, c - box.cp_max);
  const double hi = std::min(c, box.user_max);
  const auto objective = [&](double p) { return surplus_welfare(model, p, c - p); };
  const int points = std::max(3, options.scan_points);
  const auto slope = [&](double p) {
    const ObjectiveGradients g = evaluate(model, p, c - p).gradients;
    return g.surplus_p - g.surplus_q;
  };
  const detail::ScalarMax best =
      polish_1d(objective, slope,
                scan_and_refine(objective, lo, hi, points, options.price_tolerance), lo, hi,
                (hi - lo) / (points - 1));

  OptimumReport report;
  report.kind = OptimumKind::WelfareTwoSided;
  report.prices = {best.x, c - best.x};
  report.objective = best.value;
  report.equilibrium = solve_equilibrium(model, report.prices.user, report.prices.cp);
  report.diagnostics = diagnose(model, report.kind, report.prices);
  if (near_edge(report.prices.user, box.user_max) || near_edge(report.prices.cp, box.cp_max)) {
    report.diagnostics.interior = false;
  }
  return report;
}

OptimumReport optimize_one_sided(const MarketModel& model, Objective objective,
                                 const OptimizerOptions& options) {
  model.validate();
  const PriceBox box = price_box(model);
  OptimumReport report;

  if (objective == Objective::Profit) {
    const auto f = [&](double p) { return profit(model, p, 0.0); };
    const int points = std::max(3, options.scan_points);
    const auto slope = [&](double p) { return evaluate(model, p, 0.0).gradients.profit_p; };
    const detail::ScalarMax best =
        polish_1d(f, slope, scan_and_refine(f, 0.0, box.user_max, points, kLineTolerance), 0.0,
                  box.user_max, box.user_max / (points - 1));
    report.kind = OptimumKind::ProfitOneSided;
    report.prices = {best.x, 0.0};
    report.objective = best.value;
    report.diagnostics.interior = !near_edge(best.x, box.user_max);
  } else {
    report.kind = OptimumKind::WelfareOneSided;
    report.prices = {model.cost, 0.0};
    report.objective = surplus_welfare(model, model.cost, 0.0);
    report.diagnostics.interior = false;
  }
  report.equilibrium = solve_equilibrium(model, report.prices.user, report.prices.cp);
  if (!report.equilibrium.degenerate) {
    const bool interior = report.diagnostics.interior;
    report.diagnostics = diagnose(model, report.kind, report.prices);
    report.diagnostics.interior = interior;
  }
  return report;
}

GrowthRates growth_rates(const MarketModel& model, const OptimizerOptions& options) {
  GrowthRates out;
  out.profit_two_sided = optimize_profit(model, options);
  out.profit_one_sided = optimize_one_sided(model, Objective::Profit, options);
  out.welfare_two_sided = optimize_welfare(model, options);
  out.welfare_one_sided = optimize_one_sided(model, Objective::Welfare, options);

  const double u_one = out.profit_one_sided.objective;
  const double w_one = out.welfare_one_sided.objective;
  if (!(u_one > 0.0)) throw DegenerateError("growth rates: one-sided profit optimum is not positive");
  if (!(w_one > 0.0)) throw DegenerateError("growth rates: one-sided welfare is not positive");
  out.profit = (out.profit_two_sided.objective - u_one) / u_one;
  out.welfare = (out.welfare_two_sided.objective - w_one) / w_one;
  return out;
}

}  // namespace twosided

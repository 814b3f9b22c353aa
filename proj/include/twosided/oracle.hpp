#pragma once

#include <functional>
#include <optional>

#include "twosided/optimize.hpp"
#include "twosided/primitives.hpp"

// Brute-force reference implementations. None of these share a code path
// with the solvers they check: the equilibrium oracle iterates the
// congestion map instead of bisecting the gap, and the grid oracles compute
// their objectives from the equilibrium throughput directly.
namespace twosided::oracle {

/// Uniform grid over prices. For the welfare objective only the user axis
/// is used (q = c - p).
struct GridSpec {
  int points = 2001;
  std::optional<double> user_lo, user_hi;
  std::optional<double> cp_lo, cp_hi;
  unsigned threads = 1;
};

enum class GridObjective { Profit, WelfareOnRamseySegment };

struct GridOptimum {
  PricePair prices;
  double value = 0.0;
  double user_cell = 0.0;  ///< grid spacing on the user axis
  double cp_cell = 0.0;    ///< grid spacing on the CP axis (0 on the segment)
};

/// Exhaustive evaluation with a lexicographic (smallest p, then q)
/// tie-break. Rows may be split across threads; the reduction is in row
/// order so the result is independent of the thread count.
GridOptimum grid_optimize(const MarketModel& model, GridObjective objective,
                          const GridSpec& grid = {});

/// Dense one-sided profit grid over p with q = 0.
GridOptimum grid_optimize_one_sided(const MarketModel& model, int points);

struct FixedPointOptions {
  double damping = 0.5;
  double tolerance = 1e-12;
  int max_iterations = 100000;
  /// Defaults to Phi(0, mu) + 1e-6.
  std::optional<double> start;
};

/// Damped iteration phi <- (1 - t) phi + t Phi(m n rho(phi, s), mu). An
/// update that leaves the domain of Phi is halved until admissible. Throws
/// ConvergenceError at the iteration cap.
double fixed_point_equilibrium(const MarketModel& model, double user_price, double cp_price,
                               const FixedPointOptions& options = {});

/// Same iteration from raw demand levels m and n.
double fixed_point_for_demand(const MarketModel& model, double user_demand, double cp_demand,
                              const FixedPointOptions& options = {});

struct StepPolicy {
  double relative_step = 1e-5;  ///< h = relative_step * max(1, |x|)
  bool five_point = false;
};

/// Central-difference derivative of f at x.
double finite_difference(const std::function<double(double)>& f, double x,
                         const StepPolicy& policy = {});

}  // namespace twosided::oracle

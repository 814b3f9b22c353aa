#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "twosided/primitives.hpp"

namespace twosided::testing {

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  // Not std::uniform_real_distribution: its output is library-specific.
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

struct RandomCase {
  MarketModel model;
  double p = 0.0;
  double q = 0.0;
};

/// Builtin families with parameters and prices drawn from moderate ranges.
inline RandomCase random_case(std::mt19937_64& rng) {
  RandomCase c;
  const bool mm1 = rng() & 1u;
  const bool exponential = rng() & 1u;
  c.model.congestion = mm1 ? CongestionCurve::mm1() : CongestionCurve::sharing();
  c.model.gain = exponential ? GainCurve::exponential() : GainCurve::reciprocal();
  c.model.user_demand = DemandCurve::user_power(uniform(rng, 0.5, 3.0));
  c.model.cp_demand = DemandCurve::cp_power(uniform(rng, 0.5, 3.0));
  c.model.capacity = uniform(rng, 0.3, 5.0);
  c.model.sensitivity = uniform(rng, 0.3, 3.0);
  c.p = uniform(rng, 0.02, 0.95);
  c.q = uniform(rng, 0.02, 0.95);
  return c;
}

/// m = 1 - p, n = (1 - q)^2, rho = exp(-phi), sharing. The Exponential gain
/// with s = e - 1 gives (s + 1)^(-phi) = exp(-phi).
inline MarketModel worked_example(double capacity) {
  MarketModel m;
  m.congestion = CongestionCurve::sharing();
  m.gain = GainCurve::exponential();
  m.sensitivity = std::exp(1.0) - 1.0;
  m.user_demand = DemandCurve::user_power(1.0);
  m.cp_demand = DemandCurve::custom([](double q) { return (1.0 - q) * (1.0 - q); }, 1.0,
                                    [](double q) { return -2.0 * (1.0 - q); },
                                    [](double q) { return std::pow(1.0 - q, 3) / 3.0; },
                                    "squared");
  m.cost = 0.7;
  m.capacity = capacity;
  return m;
}

/// rho = exp(-a phi - b phi^2 - s c phi^6): convex decay dominated by the
/// quadratic term, with sensitivity acting on the high-congestion tail.
inline GainCurve video_gain(double a = 0.1, double b = 1.0, double c = 0.01) {
  auto expo = [=](double phi, double s) { return a * phi + b * phi * phi + s * c * std::pow(phi, 6); };
  auto rate = [=](double phi, double s) { return a + 2.0 * b * phi + 6.0 * s * c * std::pow(phi, 5); };
  return GainCurve::custom([=](double phi, double s) { return std::exp(-expo(phi, s)); },
                           [=](double phi, double s) { return -rate(phi, s) * std::exp(-expo(phi, s)); },
                           "video");
}

/// MM1 with the video gain at a capacity where d eps / d phi > 0 and
/// d2 rho / d phi d s < 0 at both optima.
inline MarketModel video_model(double capacity = 0.8) {
  MarketModel m = MarketModel::baseline(CongestionCurve::mm1(), video_gain());
  m.capacity = capacity;
  m.cp_demand = DemandCurve::cp_power(2.0);
  return m;
}

}  // namespace twosided::testing

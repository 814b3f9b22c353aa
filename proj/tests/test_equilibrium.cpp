#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "support.hpp"
#include "twosided/equilibrium.hpp"
#include "twosided/errors.hpp"
#include "twosided/oracle.hpp"

using namespace twosided;
using twosided::testing::random_case;
using twosided::testing::uniform;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// Central difference at step 1e-5 * max(1, |x|).
template <class F>
double fd(const F& f, double x) {
  return oracle::finite_difference(f, x, {});
}

}  // namespace

TEST_CASE("closed form: sharing with reciprocal gain") {
  MarketModel m = MarketModel::baseline();
  m.capacity = 0.5;
  const Equilibrium eq = solve_equilibrium(m, 0.0, 0.0);
  CHECK(std::abs(eq.congestion - 1.0) <= 1e-10);
  CHECK(std::abs(eq.throughput - 0.5) <= 1e-10);
  CHECK(eq.elasticity == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK_FALSE(eq.degenerate);
}

TEST_CASE("closed form: MM1 with reciprocal gain") {
  MarketModel m = MarketModel::baseline(CongestionCurve::mm1());
  m.capacity = 2.0;
  const Equilibrium eq = solve_equilibrium(m, 0.0, 0.0);
  CHECK(std::abs(eq.congestion - 1.0 / std::sqrt(2.0)) <= 1e-10);
  CHECK(std::abs(eq.throughput - (2.0 - std::sqrt(2.0))) <= 1e-10);
  const double phi = eq.congestion;
  const double G = phi * phi / ((phi + 1.0) * (phi + 1.0));
  CHECK(std::abs(eq.elasticity - 1.0 / (1.0 + G)) <= 1e-10);
}

TEST_CASE("zero demand gives the degenerate equilibrium") {
  for (const CongestionCurve& c : {CongestionCurve::sharing(), CongestionCurve::mm1()}) {
    MarketModel m = MarketModel::baseline(c);
    m.capacity = 3.0;
    const Equilibrium eq = solve_equilibrium(m, 1.0, 0.2);
    CHECK(eq.degenerate);
    CHECK(eq.throughput == 0.0);
    CHECK(eq.congestion == c.floor(3.0));
    CHECK(solve_equilibrium(m, 0.2, 1.0).degenerate);
  }
}

TEST_CASE("no-congestion limit") {
  MarketModel m = MarketModel::baseline();
  m.capacity = 1e9;
  const Equilibrium eq = solve_equilibrium(m, 0.3, 0.3);
  CHECK(std::abs(eq.elasticity - 1.0) <= 1e-3);
  CHECK(eq.gap_residual <= 1e-10 * std::max(1.0, eq.throughput));
}

TEST_CASE("equilibrium invariants on random models") {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 1000; ++i) {
    const auto c = random_case(rng);
    const Equilibrium eq = solve_equilibrium(c.model, c.p, c.q);
    REQUIRE_FALSE(eq.degenerate);
    CHECK(eq.gap_residual <= 1e-10 * std::max(1.0, eq.throughput));
    CHECK(eq.elasticity > 0.0);
    CHECK(eq.elasticity <= 1.0);
    const double demand = eq.user_demand * eq.cp_demand * c.model.gain.value(eq.congestion, c.model.sensitivity);
    CHECK(rel(eq.throughput, demand) <= 1e-12);
  }
}

TEST_CASE("gap function increases across the bracket") {
  std::mt19937_64 rng(22);
  for (int i = 0; i < 1000; ++i) {
    const auto c = random_case(rng);
    const Equilibrium eq = solve_equilibrium(c.model, c.p, c.q);
    const double mu = c.model.capacity;
    const double lo = c.model.congestion.floor(mu) + 1e-9;
    const double hi = 2.0 * eq.congestion + 1.0;
    const double mn = eq.user_demand * eq.cp_demand;
    double prev = -INFINITY;
    for (int k = 0; k < 100; ++k) {
      const double phi = lo + (hi - lo) * k / 99.0;
      const double g = c.model.congestion.throughput(phi, mu) - mn * c.model.gain.value(phi, c.model.sensitivity);
      CHECK(g > prev);
      prev = g;
    }
  }
}

TEST_CASE("elasticity identities by congestion family") {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 1000; ++i) {
    const auto c = random_case(rng);
    const Equilibrium eq = solve_equilibrium(c.model, c.p, c.q);
    const double phi = eq.congestion;
    const double s = c.model.sensitivity;
    if (c.model.congestion.family() == CongestionFamily::CapacitySharing) {
      CHECK(std::abs(eq.elasticity - 1.0 / (1.0 + c.model.gain.elasticity(phi, s))) <= 1e-10);
    } else {
      const double G = -phi * phi * c.model.gain.slope(phi, s);
      CHECK(std::abs(eq.elasticity - 1.0 / (1.0 + eq.user_demand * eq.cp_demand * G)) <= 1e-10);
    }
    CHECK(throughput_elasticity(c.model, eq) == eq.elasticity);
  }
}

TEST_CASE("reciprocal sharing elasticity closed form") {
  std::mt19937_64 rng(24);
  for (int i = 0; i < 200; ++i) {
    MarketModel m = MarketModel::baseline();
    m.sensitivity = uniform(rng, 0.2, 3.0);
    m.capacity = uniform(rng, 0.2, 5.0);
    const Equilibrium eq = solve_equilibrium(m, uniform(rng, 0.0, 0.9), uniform(rng, 0.0, 0.9));
    const double x = m.sensitivity * eq.congestion;
    CHECK(std::abs(eq.elasticity - (x + 1.0) / (2.0 * x + 1.0)) <= 1e-12);
  }
}

TEST_CASE("solver idempotence against the fixed-point iteration") {
  std::mt19937_64 rng(25);
  for (int i = 0; i < 300; ++i) {
    const auto c = random_case(rng);
    const Equilibrium eq = solve_equilibrium(c.model, c.p, c.q);
    oracle::FixedPointOptions opts;
    opts.start = eq.congestion;
    const double again = oracle::fixed_point_equilibrium(c.model, c.p, c.q, opts);
    CHECK(std::abs(again - eq.congestion) <= 1e-12 * std::max(1.0, eq.congestion));
  }
}

TEST_CASE("comparative statics signs at baseline") {
  const ComparativeStatics cs = comparative_statics(MarketModel::baseline(), 0.3, 0.3);
  CHECK(cs.dphi_dm.value > 0.0);
  CHECK(cs.dphi_dmu.value < 0.0);
  CHECK(cs.dlambda_dmu.value > 0.0);
  CHECK(cs.dphi_dp.value < 0.0);
  CHECK(cs.dlambda_dp.value < 0.0);
  CHECK(cs.all_signs_hold());
}

TEST_CASE("comparative statics against finite differences") {
  std::mt19937_64 rng(26);
  for (int i = 0; i < 1000; ++i) {
    const auto c = random_case(rng);
    const MarketModel& model = c.model;
    const ComparativeStatics cs = comparative_statics(model, c.p, c.q);
    CHECK(cs.all_signs_hold());
    const double m = cs.equilibrium.user_demand;
    const double n = cs.equilibrium.cp_demand;

    auto by_m = [&](double x) { return solve_for_demand(model, x, n); };
    auto by_n = [&](double x) { return solve_for_demand(model, m, x); };
    auto by_mu = [&](double x) {
      MarketModel t = model;
      t.capacity = x;
      return solve_equilibrium(t, c.p, c.q);
    };
    auto by_p = [&](double x) { return solve_equilibrium(model, x, c.q); };
    auto by_q = [&](double x) { return solve_equilibrium(model, c.p, x); };

    auto check = [&](const SignedDerivative& d, auto solve, double x, bool phi) {
      const double num = fd([&](double t) {
        const Equilibrium e = solve(t);
        return phi ? e.congestion : e.throughput;
      }, x);
      CHECK(std::abs(d.value - num) <= 1e-4 * std::max(std::abs(num), 1e-6));
    };
    check(cs.dphi_dm, by_m, m, true);
    check(cs.dlambda_dm, by_m, m, false);
    check(cs.dphi_dn, by_n, n, true);
    check(cs.dlambda_dn, by_n, n, false);
    check(cs.dphi_dmu, by_mu, model.capacity, true);
    check(cs.dlambda_dmu, by_mu, model.capacity, false);
    check(cs.dphi_dp, by_p, c.p, true);
    check(cs.dlambda_dp, by_p, c.p, false);
    check(cs.dphi_dq, by_q, c.q, true);
    check(cs.dlambda_dq, by_q, c.q, false);
  }
}

TEST_CASE("throughput elasticities in m and n coincide") {
  std::mt19937_64 rng(27);
  for (int i = 0; i < 1000; ++i) {
    const auto c = random_case(rng);
    const ComparativeStatics cs = comparative_statics(c.model, c.p, c.q);
    CHECK(std::abs(cs.elasticity_m() - cs.elasticity_n()) <= 1e-8);
    CHECK(std::abs(cs.elasticity_m() - cs.equilibrium.elasticity) <= 1e-8);

    // Demand-scaled re-solve: lambda(m (1 + h), n) against lambda(m, n (1 + h)).
    const double m = cs.equilibrium.user_demand;
    const double n = cs.equilibrium.cp_demand;
    const double lam = cs.equilibrium.throughput;
    const double h = 1e-5;
    const double em = (solve_for_demand(c.model, m * (1.0 + h), n).throughput -
                       solve_for_demand(c.model, m * (1.0 - h), n).throughput) / (2.0 * h * lam);
    const double en = (solve_for_demand(c.model, m, n * (1.0 + h)).throughput -
                       solve_for_demand(c.model, m, n * (1.0 - h)).throughput) / (2.0 * h * lam);
    CHECK(std::abs(em - en) <= 1e-8);
  }
}

TEST_CASE("price elasticity ratio") {
  std::mt19937_64 rng(28);
  for (int i = 0; i < 1000; ++i) {
    const auto c = random_case(rng);
    const ComparativeStatics cs = comparative_statics(c.model, c.p, c.q);
    const double lhs = cs.elasticity_p() * c.model.cp_demand.elasticity(c.q);
    const double rhs = cs.elasticity_q() * c.model.user_demand.elasticity(c.p);
    CHECK(rel(lhs, rhs) <= 1e-6);
  }
}

TEST_CASE("statics reject zero demand") {
  CHECK_THROWS_AS(comparative_statics(MarketModel::baseline(), 1.0, 0.3), DomainError);
}

TEST_CASE("bracket failure for a curve without a root") {
  MarketModel m = MarketModel::baseline();
  m.gain = GainCurve::custom([](double, double) { return 1.0; }, [](double, double) { return 0.0; });
  m.congestion = CongestionCurve::custom(
      [](double lambda, double mu) { return -std::log(1.0 - lambda / mu); },
      [](double phi, double mu) { return mu * (1.0 - std::exp(-phi)); });
  m.capacity = 0.5;
  CHECK_THROWS_AS(solve_equilibrium(m, 0.0, 0.0), BracketError);
}

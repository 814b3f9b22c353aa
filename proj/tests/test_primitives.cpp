#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "support.hpp"
#include "twosided/detail/numeric.hpp"
#include "twosided/errors.hpp"
#include "twosided/primitives.hpp"

using namespace twosided;
using twosided::testing::uniform;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST_CASE("gain values") {
  const GainCurve r = GainCurve::reciprocal();
  const GainCurve e = GainCurve::exponential();
  CHECK(r.value(0.0, 1.0) == 1.0);
  CHECK(r.value(1.0, 1.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(e.value(1.0, 1.0) == doctest::Approx(0.5).epsilon(1e-15));
  for (double s : {0.1, 1.0, 7.0}) {
    CHECK(r.value(0.0, s) == 1.0);
    CHECK(e.value(0.0, s) == 1.0);
  }
}

TEST_CASE("gain slopes") {
  const GainCurve r = GainCurve::reciprocal();
  const GainCurve e = GainCurve::exponential();
  CHECK(r.slope(1.0, 1.0) == doctest::Approx(-0.25).epsilon(1e-14));
  CHECK(e.slope(0.0, 1.0) == doctest::Approx(-std::log(2.0)).epsilon(1e-14));

  std::mt19937_64 rng(11);
  for (int i = 0; i < 1000; ++i) {
    const double phi = uniform(rng, 0.01, 20.0);
    const double s = uniform(rng, 0.1, 5.0);
    for (const GainCurve* g : {&r, &e}) {
      const double fd = detail::numeric_slope([&](double x) { return g->value(x, s); }, phi);
      CHECK(rel(g->slope(phi, s), fd) < 1e-5);
    }
  }
}

TEST_CASE("gain elasticities") {
  const GainCurve r = GainCurve::reciprocal();
  const GainCurve e = GainCurve::exponential();
  CHECK(r.elasticity(1.0, 1.0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(e.elasticity(2.0, 1.0) == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-14));
  CHECK(r.elasticity(0.0, 1.0) == 0.0);
  CHECK(e.elasticity(0.0, 3.0) == 0.0);
  CHECK(twosided::testing::video_gain().elasticity(0.0, 1.0) == 0.0);
}

TEST_CASE("gain domain errors") {
  const GainCurve r = GainCurve::reciprocal();
  CHECK_THROWS_AS(r.value(-0.1, 1.0), DomainError);
  CHECK_THROWS_AS(r.value(1.0, 0.0), DomainError);
  CHECK_THROWS_AS(GainCurve::exponential().slope(1.0, -1.0), DomainError);
}

TEST_CASE("gain shape invariants") {
  std::mt19937_64 rng(12);
  for (const GainCurve& g : {GainCurve::reciprocal(), GainCurve::exponential()}) {
    for (int i = 0; i < 1000; ++i) {
      const double s = uniform(rng, 0.1, 5.0);
      const double phi = uniform(rng, 0.0, 30.0);
      const double v = g.value(phi, s);
      CHECK(v > 0.0);
      CHECK(v <= 1.0);
      CHECK(g.value(phi + 0.01, s) < v);
      CHECK(g.value(1e6, s) < 1e-3);
    }
  }
}

TEST_CASE("gain decreases in sensitivity") {
  std::mt19937_64 rng(13);
  for (const GainCurve& g : {GainCurve::reciprocal(), GainCurve::exponential()}) {
    for (int i = 0; i < 1000; ++i) {
      const double s1 = uniform(rng, 0.1, 4.0);
      const double s2 = s1 + uniform(rng, 0.01, 1.0);
      const double phi = uniform(rng, 0.01, 10.0);
      CHECK(g.value(phi, s1) > g.value(phi, s2));
    }
  }
}

// The slope ordering in s holds only while s*phi < 1 (reciprocal) and
// phi*ln(1+s) < 1 (exponential); past that the sign flips.
TEST_CASE("gain cross-sensitivity on its domain") {
  std::mt19937_64 rng(14);
  const GainCurve r = GainCurve::reciprocal();
  const GainCurve e = GainCurve::exponential();
  int checked = 0;
  for (int i = 0; i < 4000; ++i) {
    const double s1 = uniform(rng, 0.1, 3.0);
    const double s2 = s1 + uniform(rng, 0.001, 0.5);
    const double phi = uniform(rng, 0.001, 3.0);
    if (s2 * phi < 1.0) {
      CHECK(r.slope(phi, s1) > r.slope(phi, s2));
      ++checked;
    }
    if (phi * std::log1p(s2) < 1.0) {
      CHECK(e.slope(phi, s1) > e.slope(phi, s2));
      ++checked;
    }
  }
  CHECK(checked > 1000);

  // Outside the domain the ordering reverses.
  CHECK(r.slope(3.0, 1.0) < r.slope(3.0, 1.5));
  CHECK(e.slope(3.0, 1.0) < e.slope(3.0, 1.5));
}

TEST_CASE("custom gain without slope differentiates numerically") {
  const GainCurve g = GainCurve::custom([](double phi, double s) { return 1.0 / (1.0 + s * phi * phi); });
  CHECK(g.slope(1.0, 1.0) == doctest::Approx(-0.5).epsilon(1e-6));
  CHECK(g.family() == GainFamily::Custom);
}

TEST_CASE("congestion examples") {
  const CongestionCurve sh = CongestionCurve::sharing();
  const CongestionCurve mm = CongestionCurve::mm1();
  CHECK(sh.congestion(0.5, 0.5) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(sh.throughput(1.0, 0.5) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(mm.congestion(2.0 - std::sqrt(2.0), 2.0) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
  CHECK(sh.congestion(0.0, 3.0) == 0.0);
  CHECK(mm.congestion(0.0, 4.0) == doctest::Approx(0.25));
  CHECK(sh.floor(2.0) == 0.0);
  CHECK(mm.floor(2.0) == 0.5);
}

TEST_CASE("congestion domain errors") {
  const CongestionCurve mm = CongestionCurve::mm1();
  CHECK_THROWS_AS(mm.congestion(2.0, 2.0), DomainError);
  CHECK_THROWS_AS(mm.congestion(3.0, 2.0), DomainError);
  CHECK_THROWS_AS(mm.throughput(0.4, 2.0), DomainError);
  CHECK_THROWS_AS(CongestionCurve::sharing().congestion(1.0, 0.0), DomainError);
  CHECK_FALSE(mm.admits(2.0, 2.0));
  CHECK(mm.admits(1.999, 2.0));
}

TEST_CASE("congestion inverse round trip and monotonicity") {
  std::mt19937_64 rng(15);
  for (const CongestionCurve& c : {CongestionCurve::sharing(), CongestionCurve::mm1()}) {
    for (int i = 0; i < 1000; ++i) {
      const double mu = uniform(rng, 0.1, 10.0);
      const double lambda = uniform(rng, 0.0, c.family() == CongestionFamily::MM1 ? 0.999 * mu : 20.0);
      const double phi = c.congestion(lambda, mu);
      CHECK(std::abs(c.throughput(phi, mu) - lambda) <= 1e-12 * std::max(1.0, lambda));
      const double dl = 1e-3 * mu;
      if (c.admits(lambda + dl, mu)) CHECK(c.congestion(lambda + dl, mu) > phi);
      CHECK(c.congestion(lambda, mu * 1.01) < phi);
      CHECK(c.throughput(phi * 1.01, mu) > c.throughput(phi, mu));
      CHECK(c.throughput(phi, mu * 1.01) > c.throughput(phi, mu));
    }
  }
}

TEST_CASE("congestion slopes and cross derivative") {
  std::mt19937_64 rng(16);
  for (const CongestionCurve& c : {CongestionCurve::sharing(), CongestionCurve::mm1()}) {
    for (int i = 0; i < 1000; ++i) {
      const double mu = uniform(rng, 0.2, 5.0);
      const double phi = c.floor(mu) + uniform(rng, 0.05, 5.0);
      const double fphi = detail::numeric_slope([&](double x) { return c.throughput(x, mu); }, phi);
      const double fmu = detail::numeric_slope([&](double x) { return c.throughput(phi, x); }, mu);
      CHECK(rel(c.throughput_slope_phi(phi, mu), fphi) < 1e-5);
      CHECK(rel(c.throughput_slope_mu(phi, mu), fmu) < 1e-5);
      const double cross = detail::numeric_slope(
          [&](double x) { return c.throughput_slope_phi(phi, x); }, mu, 1e-4);
      if (c.family() == CongestionFamily::MM1) {
        CHECK(std::abs(cross) < 1e-8);
      } else {
        CHECK(cross > 0.0);
      }
    }
  }
}

TEST_CASE("demand examples") {
  const DemandCurve m = DemandCurve::user_power(1.0);
  CHECK(m.value(0.3) == doctest::Approx(0.7).epsilon(1e-15));
  CHECK(m.hazard(0.3) == doctest::Approx(1.0 / 0.7).epsilon(1e-14));
  CHECK(m.surplus(0.3) == doctest::Approx(0.245).epsilon(1e-14));
  CHECK(m.per_unit_surplus(0.3) == doctest::Approx(0.35).epsilon(1e-14));
  CHECK(m.hazard(0.0) == doctest::Approx(1.0).epsilon(1e-15));

  const DemandCurve n = DemandCurve::cp_power(2.0);
  CHECK(n.value(0.5) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(n.hazard(0.5) == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
  CHECK(n.value(1.0) == 0.0);
}

TEST_CASE("demand domain errors") {
  const DemandCurve m = DemandCurve::user_power(2.0);
  CHECK_THROWS_AS(m.hazard(1.0), DomainError);
  CHECK_THROWS_AS(m.per_unit_surplus(1.0), DomainError);
  CHECK_THROWS_AS(m.value(-0.01), DomainError);
  CHECK(m.value(1.5) == 0.0);
  CHECK_THROWS_AS(DemandCurve::user_power(0.0), DomainError);
  CHECK_THROWS_AS(DemandCurve::cp_power(-1.0), DomainError);
}

TEST_CASE("demand derivatives and surplus") {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 1000; ++i) {
    const DemandCurve curves[] = {DemandCurve::user_power(uniform(rng, 0.3, 4.0)),
                                  DemandCurve::cp_power(uniform(rng, 0.3, 4.0))};
    const double x = uniform(rng, 0.01, 0.99);
    for (const DemandCurve& d : curves) {
      const double fd = detail::numeric_slope([&](double t) { return d.value(t); }, x);
      CHECK(rel(d.slope(x), fd) < 1e-5);
      const double ds = detail::numeric_slope([&](double t) { return d.surplus(t); }, x);
      CHECK(std::abs(ds + d.value(x)) < 1e-6);
      CHECK(d.hazard(x) >= 0.0);
      CHECK(d.value(x + 1e-3) < d.value(x));
    }
  }
}

TEST_CASE("custom demand surplus by quadrature") {
  const DemandCurve d = DemandCurve::custom([](double x) { return (1.0 - x) * (1.0 - x); }, 1.0);
  for (double x : {0.0, 0.2, 0.7, 0.95}) {
    CHECK(std::abs(d.surplus(x) - std::pow(1.0 - x, 3) / 3.0) < 1e-10);
    CHECK(d.slope(x) == doctest::Approx(-2.0 * (1.0 - x)).epsilon(1e-6));
  }
}

// Increasing hazards hold for alpha <= 1 and beta >= 1 only; outside that
// range the hazard starts infinite at zero price and first falls.
TEST_CASE("demand hazard monotone where the family allows it") {
  std::mt19937_64 rng(18);
  for (int i = 0; i < 200; ++i) {
    const DemandCurve curves[] = {DemandCurve::user_power(uniform(rng, 0.2, 1.0)),
                                  DemandCurve::cp_power(uniform(rng, 1.0, 4.0))};
    for (const DemandCurve& d : curves) {
      double prev = d.hazard(0.0);
      for (int k = 1; k <= 200; ++k) {
        const double x = (1.0 - 1e-6) * k / 200.0;
        const double h = d.hazard(x);
        CHECK(h > prev);
        prev = h;
        const double sh = d.surplus_hazard(x);
        CHECK(sh >= d.surplus_hazard(x * 0.999));
      }
    }
  }
  const DemandCurve m = DemandCurve::user_power(2.0);
  CHECK(m.hazard(0.01) > m.hazard(0.2));
  const DemandCurve n = DemandCurve::cp_power(0.5);
  CHECK(n.hazard(0.01) > n.hazard(0.2));
}

// Same restriction as the demand hazard: alpha <= 1, beta >= 1.
TEST_CASE("surplus hazard increases where the family allows it") {
  std::mt19937_64 rng(19);
  for (int i = 0; i < 200; ++i) {
    const DemandCurve curves[] = {DemandCurve::user_power(uniform(rng, 0.3, 1.0)),
                                  DemandCurve::cp_power(uniform(rng, 1.0, 4.0))};
    for (const DemandCurve& d : curves) {
      double prev = d.surplus_hazard(0.0);
      for (int k = 1; k < 100; ++k) {
        const double h = d.surplus_hazard(k / 100.0);
        CHECK(h > prev);
        prev = h;
      }
    }
  }
  const DemandCurve m = DemandCurve::user_power(2.0);
  CHECK(m.surplus_hazard(0.001) < m.surplus_hazard(0.0));
  const DemandCurve n = DemandCurve::cp_power(0.5);
  CHECK(n.surplus_hazard(0.001) < n.surplus_hazard(0.0));
}

TEST_CASE("model validation") {
  MarketModel m = MarketModel::baseline();
  CHECK_NOTHROW(m.validate());
  m.capacity = 0.0;
  CHECK_THROWS_AS(m.validate(), DomainError);
  m = MarketModel::baseline();
  m.sensitivity = -1.0;
  CHECK_THROWS_AS(m.validate(), DomainError);
  m = MarketModel::baseline();
  m.cost = 2.0;
  CHECK_THROWS_AS(m.validate(), DomainError);
  m.cost = -0.1;
  CHECK_THROWS_AS(m.validate(), DomainError);
}

TEST_CASE("curves are safe to share between threads") {
  const GainCurve g = GainCurve::exponential();
  const DemandCurve d = DemandCurve::user_power(1.7);
  std::vector<double> out(64);
  detail::parallel_for(out.size(), 4, [&](std::size_t i) {
    const double x = 0.01 * static_cast<double>(i);
    out[i] = g.value(x, 1.3) + d.surplus(x);
  });
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double x = 0.01 * static_cast<double>(i);
    CHECK(out[i] == g.value(x, 1.3) + d.surplus(x));
  }
}

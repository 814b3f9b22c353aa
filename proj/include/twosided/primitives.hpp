#pragma once

#include <functional>
#include <string>
#include <utility>

namespace twosided {

enum class GainFamily { Reciprocal, Exponential, Custom };
enum class CongestionFamily { CapacitySharing, MM1, Custom };
enum class DemandFamily { UserPower, CpPower, Custom };

std::string to_string(GainFamily family);
std::string to_string(CongestionFamily family);
std::string to_string(DemandFamily family);

/// Throughput gain rho(phi, s): the fraction of desirable throughput that
/// survives congestion phi for users of congestion sensitivity s.
///
/// Builtins are 1/(s*phi + 1) and (s + 1)^(-phi). A custom gain supplies
/// its value function and optionally its phi-slope; a missing slope is
/// central-differenced at relative step 1e-6.
class GainCurve {
 public:
  using Fn = std::function<double(double phi, double s)>;

  static GainCurve reciprocal();
  static GainCurve exponential();
  static GainCurve custom(Fn value, Fn slope = {}, std::string name = "custom");

  GainFamily family() const { return family_; }
  const std::string& name() const { return name_; }

  double value(double phi, double s) const;
  /// d rho / d phi.
  double slope(double phi, double s) const;
  /// phi * |d rho / d phi| / rho; zero at phi = 0.
  double elasticity(double phi, double s) const;
  /// |d rho / d phi| / rho.
  double hazard(double phi, double s) const;

 private:
  GainCurve(GainFamily family, std::string name) : family_(family), name_(std::move(name)) {}

  GainFamily family_;
  std::string name_;
  Fn value_;
  Fn slope_;
};

/// Congestion function Phi(lambda, mu) and its inverse in lambda,
/// Lambda(phi, mu), the throughput that induces congestion phi.
class CongestionCurve {
 public:
  using Fn = std::function<double(double, double)>;

  /// Phi = lambda / mu.
  static CongestionCurve sharing();
  /// Phi = 1 / (mu - lambda), defined for lambda < mu.
  static CongestionCurve mm1();
  /// `congestion` is Phi(lambda, mu) and must return a non-finite value
  /// outside its domain; `throughput` is its inverse Lambda(phi, mu).
  static CongestionCurve custom(Fn congestion, Fn throughput, std::string name = "custom");

  CongestionFamily family() const { return family_; }
  const std::string& name() const { return name_; }

  /// Phi(lambda, mu).
  double congestion(double lambda, double mu) const;
  /// Lambda(phi, mu).
  double throughput(double phi, double mu) const;
  /// Phi(0, mu), the congestion floor of an idle link.
  double floor(double mu) const;
  /// Whether Phi(lambda, mu) is defined.
  bool admits(double lambda, double mu) const;

  double throughput_slope_phi(double phi, double mu) const;
  double throughput_slope_mu(double phi, double mu) const;

 private:
  CongestionCurve(CongestionFamily family, std::string name)
      : family_(family), name_(std::move(name)) {}

  CongestionFamily family_;
  std::string name_;
  Fn congestion_;
  Fn throughput_;
};

/// Demand curve over a price x in [0, support]: the active user population
/// m(p) on the user side or the desirable throughput n(q) on the CP side.
///
/// UserPower is m(p) = 1 - p^(1/alpha); CpPower is n(q) = 1 - q^beta. Both
/// have support [0, 1]. Surplus is S(x), the integral of demand from x to
/// the support bound.
class DemandCurve {
 public:
  using Fn = std::function<double(double)>;

  static DemandCurve user_power(double alpha);
  static DemandCurve cp_power(double beta);
  /// Missing slope is central-differenced; missing surplus is integrated
  /// by adaptive Simpson to absolute tolerance 1e-10.
  static DemandCurve custom(Fn value, double support, Fn slope = {}, Fn surplus = {},
                            std::string name = "custom");

  DemandFamily family() const { return family_; }
  const std::string& name() const { return name_; }
  /// alpha or beta for the builtins, NaN for custom curves.
  double shape() const { return shape_; }
  double support() const { return support_; }

  double value(double x) const;
  double slope(double x) const;
  /// -slope / value. Throws DomainError at x >= support.
  double hazard(double x) const;
  /// d hazard / dx, central-differenced.
  double hazard_slope(double x) const;
  double surplus(double x) const;
  /// surplus / value. Throws DomainError at x >= support.
  double per_unit_surplus(double x) const;
  /// value / surplus, the hazard rate of the surplus.
  double surplus_hazard(double x) const;
  /// x * hazard, the price elasticity of demand.
  double elasticity(double x) const { return x * hazard(x); }

 private:
  DemandCurve(DemandFamily family, std::string name, double shape, double support)
      : family_(family), name_(std::move(name)), shape_(shape), support_(support) {}

  void check_domain(double x) const;

  DemandFamily family_;
  std::string name_;
  double shape_;
  double support_;
  Fn value_;
  Fn slope_;
  Fn surplus_;
};

/// The full system (m, n, mu, s) with unit traffic cost c.
struct MarketModel {
  GainCurve gain = GainCurve::reciprocal();
  CongestionCurve congestion = CongestionCurve::sharing();
  DemandCurve user_demand = DemandCurve::user_power(1.0);
  DemandCurve cp_demand = DemandCurve::cp_power(1.0);
  double cost = 0.7;
  double capacity = 1.0;
  double sensitivity = 1.0;

  /// mu = s = alpha = beta = 1, c = 0.7.
  static MarketModel baseline(CongestionCurve congestion = CongestionCurve::sharing(),
                              GainCurve gain = GainCurve::reciprocal());

  /// Throws DomainError unless mu > 0, s > 0 and 0 <= c < p_max + q_max.
  void validate() const;
};

}  // namespace twosided

#include "twosided/primitives.hpp"

#include <cmath>
#include <limits>

#include "twosided/detail/numeric.hpp"
#include "twosided/errors.hpp"

namespace twosided {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kSlopeStep = 1e-6;

void check_gain_args(double phi, double s) {
  if (!(phi >= 0.0)) throw DomainError("gain: congestion must be >= 0, got " + std::to_string(phi));
  if (!(s > 0.0)) throw DomainError("gain: sensitivity must be > 0, got " + std::to_string(s));
}

void check_capacity(double mu) {
  if (!(mu > 0.0)) throw DomainError("congestion: capacity must be > 0, got " + std::to_string(mu));
}

}  // namespace

std::string to_string(GainFamily family) {
  switch (family) {
    case GainFamily::Reciprocal: return "reciprocal";
    case GainFamily::Exponential: return "exponential";
    case GainFamily::Custom: return "custom";
  }
  return "unknown";
}

std::string to_string(CongestionFamily family) {
  switch (family) {
    case CongestionFamily::CapacitySharing: return "sharing";
    case CongestionFamily::MM1: return "mm1";
    case CongestionFamily::Custom: return "custom";
  }
  return "unknown";
}

std::string to_string(DemandFamily family) {
  switch (family) {
    case DemandFamily::UserPower: return "user_power";
    case DemandFamily::CpPower: return "cp_power";
    case DemandFamily::Custom: return "custom";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// GainCurve

GainCurve GainCurve::reciprocal() { return GainCurve(GainFamily::Reciprocal, "reciprocal"); }

GainCurve GainCurve::exponential() { return GainCurve(GainFamily::Exponential, "exponential"); }

GainCurve GainCurve::custom(Fn value, Fn slope, std::string name) {
  if (!value) throw DomainError("gain: custom curve needs a value function");
  GainCurve curve(GainFamily::Custom, std::move(name));
  curve.value_ = std::move(value);
  curve.slope_ = std::move(slope);
  return curve;
}

double GainCurve::value(double phi, double s) const {
  check_gain_args(phi, s);
  switch (family_) {
    case GainFamily::Reciprocal: return 1.0 / (s * phi + 1.0);
    case GainFamily::Exponential: return std::exp(-phi * std::log1p(s));
    case GainFamily::Custom: return value_(phi, s);
  }
  return kNaN;
}

double GainCurve::slope(double phi, double s) const {
  check_gain_args(phi, s);
  switch (family_) {
    case GainFamily::Reciprocal: {
      const double d = s * phi + 1.0;
      return -s / (d * d);
    }
    case GainFamily::Exponential: {
      const double k = std::log1p(s);
      return -k * std::exp(-phi * k);
    }
    case GainFamily::Custom:
      if (slope_) return slope_(phi, s);
      return detail::numeric_slope([&](double x) { return value_(x, s); }, phi, kSlopeStep, 0.0);
  }
  return kNaN;
}

double GainCurve::hazard(double phi, double s) const {
  return std::abs(slope(phi, s)) / value(phi, s);
}

double GainCurve::elasticity(double phi, double s) const {
  check_gain_args(phi, s);
  if (phi == 0.0) return 0.0;
  return phi * hazard(phi, s);
}

// ---------------------------------------------------------------------------
// CongestionCurve

CongestionCurve CongestionCurve::sharing() {
  return CongestionCurve(CongestionFamily::CapacitySharing, "sharing");
}

CongestionCurve CongestionCurve::mm1() { return CongestionCurve(CongestionFamily::MM1, "mm1"); }

CongestionCurve CongestionCurve::custom(Fn congestion, Fn throughput, std::string name) {
  if (!congestion || !throughput) {
    throw DomainError("congestion: custom curve needs both Phi and its inverse");
  }
  CongestionCurve curve(CongestionFamily::Custom, std::move(name));
  curve.congestion_ = std::move(congestion);
  curve.throughput_ = std::move(throughput);
  return curve;
}

double CongestionCurve::congestion(double lambda, double mu) const {
  check_capacity(mu);
  if (!(lambda >= 0.0)) throw DomainError("congestion: throughput must be >= 0");
  switch (family_) {
    case CongestionFamily::CapacitySharing: return lambda / mu;
    case CongestionFamily::MM1:
      if (!(lambda < mu)) {
        throw DomainError("mm1: throughput " + std::to_string(lambda) + " not below capacity " +
                          std::to_string(mu));
      }
      return 1.0 / (mu - lambda);
    case CongestionFamily::Custom: {
      const double phi = congestion_(lambda, mu);
      if (!std::isfinite(phi)) throw DomainError("congestion: custom Phi undefined here");
      return phi;
    }
  }
  return kNaN;
}

double CongestionCurve::throughput(double phi, double mu) const {
  check_capacity(mu);
  switch (family_) {
    case CongestionFamily::CapacitySharing:
      if (!(phi >= 0.0)) throw DomainError("sharing: congestion must be >= 0");
      return phi * mu;
    case CongestionFamily::MM1:
      if (!(phi >= 1.0 / mu)) {
        throw DomainError("mm1: congestion " + std::to_string(phi) + " below floor 1/mu");
      }
      return mu - 1.0 / phi;
    case CongestionFamily::Custom: return throughput_(phi, mu);
  }
  return kNaN;
}

double CongestionCurve::floor(double mu) const {
  check_capacity(mu);
  switch (family_) {
    case CongestionFamily::CapacitySharing: return 0.0;
    case CongestionFamily::MM1: return 1.0 / mu;
    case CongestionFamily::Custom: return congestion_(0.0, mu);
  }
  return kNaN;
}

bool CongestionCurve::admits(double lambda, double mu) const {
  if (!(mu > 0.0) || !(lambda >= 0.0)) return false;
  switch (family_) {
    case CongestionFamily::CapacitySharing: return std::isfinite(lambda);
    case CongestionFamily::MM1: return lambda < mu;
    case CongestionFamily::Custom: return std::isfinite(congestion_(lambda, mu));
  }
  return false;
}

double CongestionCurve::throughput_slope_phi(double phi, double mu) const {
  switch (family_) {
    case CongestionFamily::CapacitySharing: check_capacity(mu); return mu;
    case CongestionFamily::MM1: check_capacity(mu); return 1.0 / (phi * phi);
    case CongestionFamily::Custom:
      return detail::numeric_slope([&](double x) { return throughput_(x, mu); }, phi, kSlopeStep,
                                   floor(mu));
  }
  return kNaN;
}

double CongestionCurve::throughput_slope_mu(double phi, double mu) const {
  switch (family_) {
    case CongestionFamily::CapacitySharing: check_capacity(mu); return phi;
    case CongestionFamily::MM1: check_capacity(mu); return 1.0;
    case CongestionFamily::Custom:
      return detail::numeric_slope([&](double x) { return throughput_(phi, x); }, mu, kSlopeStep,
                                   0.0);
  }
  return kNaN;
}

// ---------------------------------------------------------------------------
// DemandCurve

DemandCurve DemandCurve::user_power(double alpha) {
  if (!(alpha > 0.0)) throw DomainError("user demand: alpha must be > 0");
  return DemandCurve(DemandFamily::UserPower, "user_power", alpha, 1.0);
}

DemandCurve DemandCurve::cp_power(double beta) {
  if (!(beta > 0.0)) throw DomainError("cp demand: beta must be > 0");
  return DemandCurve(DemandFamily::CpPower, "cp_power", beta, 1.0);
}

DemandCurve DemandCurve::custom(Fn value, double support, Fn slope, Fn surplus,
                                std::string name) {
  if (!value) throw DomainError("demand: custom curve needs a value function");
  if (!(support > 0.0) || !std::isfinite(support)) {
    throw DomainError("demand: custom curve needs a finite positive support bound");
  }
  DemandCurve curve(DemandFamily::Custom, std::move(name), kNaN, support);
  curve.value_ = std::move(value);
  curve.slope_ = std::move(slope);
  curve.surplus_ = std::move(surplus);
  return curve;
}

void DemandCurve::check_domain(double x) const {
  if (!(x >= 0.0)) throw DomainError("demand: price must be >= 0, got " + std::to_string(x));
  if (!(x < support_)) {
    throw DomainError("demand: price " + std::to_string(x) + " at or beyond support bound " +
                      std::to_string(support_));
  }
}

double DemandCurve::value(double x) const {
  if (!(x >= 0.0)) throw DomainError("demand: price must be >= 0, got " + std::to_string(x));
  if (x >= support_) return 0.0;
  switch (family_) {
    case DemandFamily::UserPower: return 1.0 - std::pow(x, 1.0 / shape_);
    case DemandFamily::CpPower: return 1.0 - std::pow(x, shape_);
    case DemandFamily::Custom: return value_(x);
  }
  return kNaN;
}

double DemandCurve::slope(double x) const {
  if (!(x >= 0.0)) throw DomainError("demand: price must be >= 0, got " + std::to_string(x));
  switch (family_) {
    case DemandFamily::UserPower: {
      const double k = 1.0 / shape_;
      return -k * std::pow(x, k - 1.0);
    }
    case DemandFamily::CpPower: return -shape_ * std::pow(x, shape_ - 1.0);
    case DemandFamily::Custom:
      if (slope_) return slope_(x);
      return detail::numeric_slope(value_, x, kSlopeStep, 0.0, support_);
  }
  return kNaN;
}

double DemandCurve::hazard(double x) const {
  check_domain(x);
  return -slope(x) / value(x);
}

double DemandCurve::hazard_slope(double x) const {
  check_domain(x);
  // Stay strictly inside the support where the hazard is finite.
  const double upper = 0.5 * (x + support_);
  return detail::numeric_slope([&](double t) { return hazard(t); }, x, 1e-5, 0.0, upper);
}

double DemandCurve::surplus(double x) const {
  if (!(x >= 0.0)) throw DomainError("demand: price must be >= 0, got " + std::to_string(x));
  if (x >= support_) return 0.0;
  switch (family_) {
    case DemandFamily::UserPower: {
      const double a = shape_;
      return (1.0 - x) - a / (a + 1.0) * (1.0 - std::pow(x, (a + 1.0) / a));
    }
    case DemandFamily::CpPower: {
      const double b = shape_;
      return (1.0 - x) - (1.0 - std::pow(x, b + 1.0)) / (b + 1.0);
    }
    case DemandFamily::Custom:
      if (surplus_) return surplus_(x);
      return detail::adaptive_simpson(value_, x, support_, 1e-10, 50);
  }
  return kNaN;
}

double DemandCurve::per_unit_surplus(double x) const {
  check_domain(x);
  return surplus(x) / value(x);
}

double DemandCurve::surplus_hazard(double x) const {
  check_domain(x);
  return value(x) / surplus(x);
}

// ---------------------------------------------------------------------------
// MarketModel

MarketModel MarketModel::baseline(CongestionCurve congestion, GainCurve gain) {
  MarketModel model;
  model.congestion = std::move(congestion);
  model.gain = std::move(gain);
  return model;
}

void MarketModel::validate() const {
  if (!(capacity > 0.0)) throw DomainError("model: capacity must be > 0");
  if (!(sensitivity > 0.0)) throw DomainError("model: sensitivity must be > 0");
  const double max_total = user_demand.support() + cp_demand.support();
  if (!(cost >= 0.0) || !(cost < max_total)) {
    throw DomainError("model: cost must lie in [0, " + std::to_string(max_total) + ")");
  }
}

}  // namespace twosided

#include "twosided/parameter.hpp"

#include "twosided/errors.hpp"

namespace twosided {

std::string to_string(Parameter parameter) {
  switch (parameter) {
    case Parameter::Capacity: return "capacity";
    case Parameter::Sensitivity: return "sensitivity";
    case Parameter::Alpha: return "alpha";
    case Parameter::Beta: return "beta";
  }
  return "unknown";
}

Parameter parse_parameter(std::string_view name) {
  if (name == "capacity" || name == "mu") return Parameter::Capacity;
  if (name == "sensitivity" || name == "s") return Parameter::Sensitivity;
  if (name == "alpha") return Parameter::Alpha;
  if (name == "beta") return Parameter::Beta;
  throw ConfigError("unknown parameter '" + std::string(name) +
                    "' (expected capacity, sensitivity, alpha or beta)");
}

double parameter_value(const MarketModel& model, Parameter parameter) {
  switch (parameter) {
    case Parameter::Capacity: return model.capacity;
    case Parameter::Sensitivity: return model.sensitivity;
    case Parameter::Alpha: return model.user_demand.shape();
    case Parameter::Beta: return model.cp_demand.shape();
  }
  return 0.0;
}

MarketModel with_parameter(const MarketModel& model, Parameter parameter, double value) {
  MarketModel out = model;
  switch (parameter) {
    case Parameter::Capacity: out.capacity = value; break;
    case Parameter::Sensitivity: out.sensitivity = value; break;
    case Parameter::Alpha:
      if (model.user_demand.family() != DemandFamily::UserPower) {
        throw DomainError("alpha applies only to the user_power demand family");
      }
      out.user_demand = DemandCurve::user_power(value);
      break;
    case Parameter::Beta:
      if (model.cp_demand.family() != DemandFamily::CpPower) {
        throw DomainError("beta applies only to the cp_power demand family");
      }
      out.cp_demand = DemandCurve::cp_power(value);
      break;
  }
  return out;
}

}  // namespace twosided

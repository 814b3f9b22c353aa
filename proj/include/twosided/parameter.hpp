#pragma once

#include <string>
#include <string_view>

#include "twosided/primitives.hpp"

namespace twosided {

/// Scalar model parameters that sweeps and sensitivities vary.
enum class Parameter { Capacity, Sensitivity, Alpha, Beta };

std::string to_string(Parameter parameter);
/// Accepts capacity|mu, sensitivity|s, alpha, beta. Throws ConfigError.
Parameter parse_parameter(std::string_view name);

double parameter_value(const MarketModel& model, Parameter parameter);
/// Copy of `model` with one parameter replaced. Alpha and Beta rebuild the
/// builtin demand family and throw DomainError on a custom demand.
MarketModel with_parameter(const MarketModel& model, Parameter parameter, double value);

}  // namespace twosided

#include "twosided/experiments.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "twosided/detail/numeric.hpp"
#include "twosided/errors.hpp"
#include "twosided/oracle.hpp"

namespace twosided {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(std::string_view key, std::string_view text) {
  text = trim(text);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value)) {
    throw ConfigError("key '" + std::string(key) + "': expected a number, got '" +
                      std::string(text) + "'");
  }
  return value;
}

long parse_integer(std::string_view key, std::string_view text) {
  text = trim(text);
  long value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError("key '" + std::string(key) + "': expected an integer, got '" +
                      std::string(text) + "'");
  }
  return value;
}

bool parse_bool(std::string_view key, std::string_view text) {
  text = trim(text);
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ConfigError("key '" + std::string(key) + "': expected true or false");
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    parts.push_back(trim(text.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

// RFC 4180 record splitter; returns false at end of input.
bool read_record(std::istream& in, std::vector<std::string>& fields) {
  fields.clear();
  std::string field;
  bool quoted = false;
  bool any = false;
  char c;
  while (in.get(c)) {
    any = true;
    if (quoted) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          field += '"';
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (c == '\n') {
      fields.push_back(std::move(field));
      return true;
    } else {
      field += c;
    }
  }
  if (!any) return false;
  fields.push_back(std::move(field));
  return true;
}

double parse_cell(const std::string& cell) {
  if (cell == "nan") return kNaN;
  if (cell == "inf") return std::numeric_limits<double>::infinity();
  if (cell == "-inf") return -std::numeric_limits<double>::infinity();
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc() || ptr != cell.data() + cell.size()) {
    throw std::runtime_error("csv: malformed number '" + cell + "'");
  }
  return value;
}

template <class Fill>
SweepResult sweep_rows(const ScenarioConfig& config, SweepKind kind, const Fill& fill) {
  if (!config.sweep) throw ConfigError("sweep: the scenario has no sweep block");
  const SweepSpec& spec = *config.sweep;
  const MarketModel base = config.model.build();
  const std::vector<double> values = spec.values();

  SweepResult result;
  result.parameter = spec.parameter;
  result.kind = kind;
  result.rows.resize(values.size());
  detail::parallel_for(values.size(), config.threads, [&](std::size_t i) {
    SweepRow& row = result.rows[i];
    row = SweepRow{};
    row.param_value = values[i];
    try {
      fill(with_parameter(base, spec.parameter, values[i]), row);
    } catch (const std::exception& e) {
      row.status = e.what();
    }
  });
  return result;
}

}  // namespace

// ---------------------------------------------------------------------------
// Configuration

MarketModel ModelSpec::build() const {
  MarketModel model;
  if (congestion == "sharing") {
    model.congestion = CongestionCurve::sharing();
  } else if (congestion == "mm1") {
    model.congestion = CongestionCurve::mm1();
  } else {
    throw ConfigError("model.congestion: expected sharing or mm1, got '" + congestion + "'");
  }
  if (gain == "reciprocal") {
    model.gain = GainCurve::reciprocal();
  } else if (gain == "exponential") {
    model.gain = GainCurve::exponential();
  } else {
    throw ConfigError("model.gain: expected reciprocal or exponential, got '" + gain + "'");
  }
  try {
    model.user_demand = DemandCurve::user_power(alpha);
    model.cp_demand = DemandCurve::cp_power(beta);
    model.cost = cost;
    model.capacity = capacity;
    model.sensitivity = sensitivity;
    model.validate();
  } catch (const DomainError& e) {
    throw ConfigError(std::string("model: ") + e.what());
  }
  return model;
}

std::vector<double> SweepSpec::values() const {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(std::max(count, 0)));
  for (int i = 0; i < count; ++i) {
    out.push_back(count == 1 ? start : start + (stop - start) * i / (count - 1));
  }
  return out;
}

void ScenarioConfig::set(std::string_view key, std::string_view value) {
  value = trim(value);
  if (key == "model.congestion") {
    model.congestion = std::string(value);
  } else if (key == "model.gain") {
    model.gain = std::string(value);
  } else if (key == "model.user_demand.alpha") {
    model.alpha = parse_double(key, value);
  } else if (key == "model.cp_demand.beta") {
    model.beta = parse_double(key, value);
  } else if (key == "model.cost") {
    model.cost = parse_double(key, value);
  } else if (key == "model.capacity") {
    model.capacity = parse_double(key, value);
  } else if (key == "model.sensitivity") {
    model.sensitivity = parse_double(key, value);
  } else if (key == "prices.user") {
    prices.user = parse_double(key, value);
  } else if (key == "prices.cp") {
    prices.cp = parse_double(key, value);
  } else if (key == "sweep.parameter") {
    if (!sweep) sweep.emplace();
    sweep->parameter = parse_parameter(value);
  } else if (key == "sweep.range") {
    if (!sweep) sweep.emplace();
    const auto parts = split(value, ':');
    if (parts.size() != 3) throw ConfigError("sweep.range: expected start:stop:count");
    sweep->start = parse_double(key, parts[0]);
    sweep->stop = parse_double(key, parts[1]);
    const long count = parse_integer(key, parts[2]);
    if (count < 1 || count > 100000) throw ConfigError("sweep.range: count out of range");
    sweep->count = static_cast<int>(count);
  } else if (key == "sweep.kind") {
    if (!sweep) sweep.emplace();
    if (value == "growth") {
      sweep->kind = SweepKind::Growth;
    } else if (value == "prices") {
      sweep->kind = SweepKind::Prices;
    } else {
      throw ConfigError("sweep.kind: expected growth or prices");
    }
  } else if (key == "sensitivity.parameters") {
    sensitivity_parameters.clear();
    for (auto name : split(value, ',')) sensitivity_parameters.push_back(parse_parameter(name));
  } else if (key == "sensitivity.step") {
    sensitivity_step = parse_double(key, value);
    if (!(sensitivity_step > 0.0 && sensitivity_step < 0.5)) {
      throw ConfigError("sensitivity.step: expected a relative step in (0, 0.5)");
    }
  } else if (key == "output.path") {
    output_path = std::string(value);
  } else if (key == "verify.enabled") {
    verify = parse_bool(key, value);
  } else if (key == "verify.points") {
    const long points = parse_integer(key, value);
    if (points < 3) throw ConfigError("verify.points: need at least 3");
    verify_points = static_cast<int>(points);
  } else if (key == "run.threads") {
    const long t = parse_integer(key, value);
    if (t < 0 || t > 1024) throw ConfigError("run.threads: out of range");
    threads = static_cast<unsigned>(t);
  } else {
    throw ConfigError("unknown key '" + std::string(key) + "'");
  }
}

ScenarioConfig ScenarioConfig::parse(std::string_view text, std::string_view origin) {
  ScenarioConfig config;
  std::set<std::string, std::less<>> seen;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;

    const auto where = std::string(origin) + ":" + std::to_string(line_no) + ": ";
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(where + "expected 'key = value'");
    const std::string_view key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError(where + "empty key");
    if (!seen.insert(std::string(key)).second) {
      throw ConfigError(where + "duplicate key '" + std::string(key) + "'");
    }
    try {
      config.set(key, line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    }
  }
  return config;
}

ScenarioConfig ScenarioConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str(), path);
}

// ---------------------------------------------------------------------------
// Sweeps

std::vector<std::string> SweepResult::columns() const {
  if (kind == SweepKind::Prices) {
    return {"param_value", "p_star", "q_star", "p_circ", "q_circ", "status"};
  }
  return {"param_value", "p_star",     "q_star",     "U_star_two", "U_star_one", "r_star",
          "p_circ",      "q_circ",     "W_circ_two", "W_circ_one", "r_circ",     "phi_star",
          "phi_circ",    "eps_star",   "eps_circ",   "status"};
}

SweepResult run_sweep(const ScenarioConfig& config) {
  return sweep_rows(config, SweepKind::Growth, [](const MarketModel& model, SweepRow& row) {
    const GrowthRates g = growth_rates(model);
    row.p_star = g.profit_two_sided.prices.user;
    row.q_star = g.profit_two_sided.prices.cp;
    row.u_two = g.profit_two_sided.objective;
    row.u_one = g.profit_one_sided.objective;
    row.r_star = g.profit;
    row.p_circ = g.welfare_two_sided.prices.user;
    row.q_circ = g.welfare_two_sided.prices.cp;
    row.w_two = g.welfare_two_sided.objective;
    row.w_one = g.welfare_one_sided.objective;
    row.r_circ = g.welfare;
    row.phi_star = g.profit_two_sided.equilibrium.congestion;
    row.phi_circ = g.welfare_two_sided.equilibrium.congestion;
    row.eps_star = g.profit_two_sided.equilibrium.elasticity;
    row.eps_circ = g.welfare_two_sided.equilibrium.elasticity;
  });
}

SweepResult price_trend_sweep(const ScenarioConfig& config) {
  return sweep_rows(config, SweepKind::Prices, [](const MarketModel& model, SweepRow& row) {
    const OptimumReport profit = optimize_profit(model);
    const OptimumReport welfare = optimize_welfare(model);
    row.p_star = profit.prices.user;
    row.q_star = profit.prices.cp;
    row.p_circ = welfare.prices.user;
    row.q_circ = welfare.prices.cp;
  });
}

// ---------------------------------------------------------------------------
// CSV

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

void write_csv(const SweepResult& result, std::ostream& out) {
  const auto cols = result.columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';
  for (const SweepRow& r : result.rows) {
    std::vector<double> nums;
    if (result.kind == SweepKind::Prices) {
      nums = {r.param_value, r.p_star, r.q_star, r.p_circ, r.q_circ};
    } else {
      nums = {r.param_value, r.p_star, r.q_star, r.u_two,    r.u_one,    r.r_star,  r.p_circ,
              r.q_circ,      r.w_two,  r.w_one,  r.r_circ, r.phi_star, r.phi_circ, r.eps_star,
              r.eps_circ};
    }
    for (double v : nums) out << format_number(v) << ',';
    out << csv_field(r.status) << '\n';
  }
}

void emit_csv(const SweepResult& result, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_csv(result, out);
  out.flush();
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

SweepResult read_csv(std::istream& in) {
  std::vector<std::string> fields;
  if (!read_record(in, fields)) throw std::runtime_error("csv: empty input");

  SweepResult result;
  result.kind = fields.size() == 6 ? SweepKind::Prices : SweepKind::Growth;
  if (fields != result.columns()) throw std::runtime_error("csv: unrecognized header");

  while (read_record(in, fields)) {
    if (fields.size() == 1 && fields[0].empty()) continue;
    if (fields.size() != result.columns().size()) {
      throw std::runtime_error("csv: row has " + std::to_string(fields.size()) + " fields");
    }
    SweepRow r;
    std::vector<double*> targets;
    if (result.kind == SweepKind::Prices) {
      targets = {&r.param_value, &r.p_star, &r.q_star, &r.p_circ, &r.q_circ};
    } else {
      targets = {&r.param_value, &r.p_star, &r.q_star,   &r.u_two,    &r.u_one,
                 &r.r_star,      &r.p_circ, &r.q_circ,   &r.w_two,    &r.w_one,
                 &r.r_circ,      &r.phi_star, &r.phi_circ, &r.eps_star, &r.eps_circ};
    }
    for (std::size_t i = 0; i < targets.size(); ++i) *targets[i] = parse_cell(fields[i]);
    r.status = fields.back();
    result.rows.push_back(std::move(r));
  }
  return result;
}

// ---------------------------------------------------------------------------
// Verification

VerifyResult verify_optimum(const MarketModel& model, const OptimumReport& report, int points,
                            unsigned threads) {
  oracle::GridSpec grid;
  grid.points = points;
  grid.threads = threads;
  VerifyResult out;
  if (report.kind == OptimumKind::ProfitTwoSided) {
    const auto best = oracle::grid_optimize(model, oracle::GridObjective::Profit, grid);
    out.cell_discrepancy = std::max(std::abs(report.prices.user - best.prices.user) / best.user_cell,
                                    std::abs(report.prices.cp - best.prices.cp) / best.cp_cell);
    out.value_shortfall = best.value - report.objective;
  } else if (report.kind == OptimumKind::WelfareTwoSided) {
    const auto best =
        oracle::grid_optimize(model, oracle::GridObjective::WelfareOnRamseySegment, grid);
    out.cell_discrepancy = std::abs(report.prices.user - best.prices.user) / best.user_cell;
    out.value_shortfall = best.value - report.objective;
  } else {
    throw std::invalid_argument("verify_optimum: only two-sided optima are verified");
  }
  return out;
}

}  // namespace twosided

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>
#include <string>

#include "twosided/equilibrium.hpp"
#include "twosided/errors.hpp"
#include "twosided/experiments.hpp"
#include "twosided/objectives.hpp"
#include "twosided/optimize.hpp"
#include "twosided/oracle.hpp"
#include "twosided/sensitivity.hpp"

namespace py = pybind11;
using namespace twosided;

namespace {

Objective parse_objective(const std::string& name) {
  if (name == "profit") return Objective::Profit;
  if (name == "welfare") return Objective::Welfare;
  throw ConfigError("objective: expected profit or welfare, got '" + name + "'");
}

py::tuple pair(const PricePair& p) { return py::make_tuple(p.user, p.cp); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Two-sided pricing on a congested network";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<DegenerateError>(m, "DegenerateError", PyExc_RuntimeError);
  py::register_exception<BracketError>(m, "BracketError", PyExc_RuntimeError);
  py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);

  py::class_<ModelSpec>(m, "Model")
      .def(py::init([](std::string congestion, std::string gain, double alpha, double beta,
                       double cost, double capacity, double sensitivity) {
             ModelSpec s;
             s.congestion = std::move(congestion);
             s.gain = std::move(gain);
             s.alpha = alpha;
             s.beta = beta;
             s.cost = cost;
             s.capacity = capacity;
             s.sensitivity = sensitivity;
             s.build();  // validate early
             return s;
           }),
           py::arg("congestion") = "sharing", py::arg("gain") = "reciprocal",
           py::arg("alpha") = 1.0, py::arg("beta") = 1.0, py::arg("cost") = 0.7,
           py::arg("capacity") = 1.0, py::arg("sensitivity") = 1.0)
      .def_readwrite("congestion", &ModelSpec::congestion)
      .def_readwrite("gain", &ModelSpec::gain)
      .def_readwrite("alpha", &ModelSpec::alpha)
      .def_readwrite("beta", &ModelSpec::beta)
      .def_readwrite("cost", &ModelSpec::cost)
      .def_readwrite("capacity", &ModelSpec::capacity)
      .def_readwrite("sensitivity", &ModelSpec::sensitivity)
      .def("__repr__", [](const ModelSpec& s) {
        std::ostringstream out;
        out << "Model(congestion='" << s.congestion << "', gain='" << s.gain
            << "', alpha=" << s.alpha << ", beta=" << s.beta << ", cost=" << s.cost
            << ", capacity=" << s.capacity << ", sensitivity=" << s.sensitivity << ")";
        return out.str();
      });

  py::class_<Equilibrium>(m, "Equilibrium")
      .def_readonly("congestion", &Equilibrium::congestion)
      .def_readonly("throughput", &Equilibrium::throughput)
      .def_readonly("elasticity", &Equilibrium::elasticity)
      .def_readonly("gap_residual", &Equilibrium::gap_residual)
      .def_readonly("iterations", &Equilibrium::iterations)
      .def_readonly("degenerate", &Equilibrium::degenerate)
      .def_readonly("user_demand", &Equilibrium::user_demand)
      .def_readonly("cp_demand", &Equilibrium::cp_demand);

  py::class_<ObjectiveGradients>(m, "Gradients")
      .def_readonly("profit_p", &ObjectiveGradients::profit_p)
      .def_readonly("profit_q", &ObjectiveGradients::profit_q)
      .def_readonly("profit_mu", &ObjectiveGradients::profit_mu)
      .def_readonly("welfare_p", &ObjectiveGradients::welfare_p)
      .def_readonly("welfare_q", &ObjectiveGradients::welfare_q)
      .def_readonly("welfare_mu", &ObjectiveGradients::welfare_mu)
      .def_readonly("surplus_p", &ObjectiveGradients::surplus_p)
      .def_readonly("surplus_q", &ObjectiveGradients::surplus_q);

  py::class_<ObjectiveReport>(m, "Objectives")
      .def_readonly("profit", &ObjectiveReport::profit)
      .def_readonly("user_welfare", &ObjectiveReport::user_welfare)
      .def_readonly("cp_welfare", &ObjectiveReport::cp_welfare)
      .def_readonly("welfare", &ObjectiveReport::welfare)
      .def_readonly("gradients", &ObjectiveReport::gradients)
      .def_readonly("equilibrium", &ObjectiveReport::equilibrium)
      .def_readonly("degenerate", &ObjectiveReport::degenerate);

  py::class_<OptimumDiagnostics>(m, "Diagnostics")
      .def_readonly("user_hazard", &OptimumDiagnostics::user_hazard)
      .def_readonly("cp_hazard", &OptimumDiagnostics::cp_hazard)
      .def_readonly("elasticity", &OptimumDiagnostics::elasticity)
      .def_readonly("kkt_residual", &OptimumDiagnostics::kkt_residual)
      .def_readonly("lerner_residual", &OptimumDiagnostics::lerner_residual)
      .def_readonly("ramsey_residual", &OptimumDiagnostics::ramsey_residual)
      .def_readonly("interior", &OptimumDiagnostics::interior);

  py::class_<OptimumReport>(m, "Optimum")
      .def_property_readonly("kind", [](const OptimumReport& r) { return to_string(r.kind); })
      .def_property_readonly("prices", [](const OptimumReport& r) { return pair(r.prices); })
      .def_readonly("objective", &OptimumReport::objective)
      .def_readonly("equilibrium", &OptimumReport::equilibrium)
      .def_readonly("diagnostics", &OptimumReport::diagnostics);

  py::class_<GrowthRates>(m, "GrowthRates")
      .def_readonly("profit", &GrowthRates::profit)
      .def_readonly("welfare", &GrowthRates::welfare)
      .def_readonly("profit_two_sided", &GrowthRates::profit_two_sided)
      .def_readonly("profit_one_sided", &GrowthRates::profit_one_sided)
      .def_readonly("welfare_two_sided", &GrowthRates::welfare_two_sided)
      .def_readonly("welfare_one_sided", &GrowthRates::welfare_one_sided);

  py::class_<SignCheck>(m, "SignCheck")
      .def_readonly("rule", &SignCheck::rule)
      .def_readonly("expected", &SignCheck::expected)
      .def_readonly("observed", &SignCheck::observed)
      .def_readonly("applicable", &SignCheck::applicable)
      .def_readonly("conclusive", &SignCheck::conclusive)
      .def_property_readonly("holds", &SignCheck::holds);

  py::class_<RatioCheck>(m, "RatioCheck")
      .def_readonly("rule", &RatioCheck::rule)
      .def_readonly("observed", &RatioCheck::observed)
      .def_readonly("predicted", &RatioCheck::predicted)
      .def_readonly("applicable", &RatioCheck::applicable)
      .def_property_readonly("relative_error", &RatioCheck::relative_error);

  py::class_<SensitivityReport>(m, "Sensitivity")
      .def_property_readonly("parameter",
                             [](const SensitivityReport& r) { return to_string(r.parameter); })
      .def_readonly("base_value", &SensitivityReport::base_value)
      .def_readonly("step", &SensitivityReport::step)
      .def_property_readonly("profit_slopes",
                             [](const SensitivityReport& r) { return pair(r.profit_slopes); })
      .def_property_readonly("welfare_slopes",
                             [](const SensitivityReport& r) { return pair(r.welfare_slopes); })
      .def_property_readonly("elasticity_slopes",
                             [](const SensitivityReport& r) {
                               return py::make_tuple(r.profit_context.elasticity_slope,
                                                     r.welfare_context.elasticity_slope);
                             })
      .def_readonly("signs", &SensitivityReport::signs)
      .def_readonly("ratios", &SensitivityReport::ratios)
      .def("all_hold", &SensitivityReport::all_hold, py::arg("ratio_tolerance") = 1e-2);

  py::class_<ScenarioConfig>(m, "Scenario")
      .def(py::init<>())
      .def_static("parse", &ScenarioConfig::parse, py::arg("text"),
                  py::arg("origin") = "<string>")
      .def_static("load", &ScenarioConfig::load, py::arg("path"))
      .def("set", &ScenarioConfig::set, py::arg("key"), py::arg("value"))
      .def_readwrite("model", &ScenarioConfig::model)
      .def_readwrite("threads", &ScenarioConfig::threads);

  py::class_<SweepRow>(m, "SweepRow")
      .def_readonly("param_value", &SweepRow::param_value)
      .def_readonly("p_star", &SweepRow::p_star)
      .def_readonly("q_star", &SweepRow::q_star)
      .def_readonly("r_star", &SweepRow::r_star)
      .def_readonly("p_circ", &SweepRow::p_circ)
      .def_readonly("q_circ", &SweepRow::q_circ)
      .def_readonly("r_circ", &SweepRow::r_circ)
      .def_readonly("status", &SweepRow::status);

  py::class_<SweepResult>(m, "SweepResult")
      .def_readonly("rows", &SweepResult::rows)
      .def("columns", &SweepResult::columns)
      .def("to_csv", [](const SweepResult& r) {
        std::ostringstream out;
        write_csv(r, out);
        return out.str();
      });

  m.def("solve_equilibrium",
        [](const ModelSpec& s, double p, double q) { return solve_equilibrium(s.build(), p, q); },
        py::arg("model"), py::arg("p"), py::arg("q"));
  m.def("fixed_point_equilibrium",
        [](const ModelSpec& s, double p, double q) {
          return oracle::fixed_point_equilibrium(s.build(), p, q);
        },
        py::arg("model"), py::arg("p"), py::arg("q"));
  m.def("evaluate", [](const ModelSpec& s, double p, double q) { return evaluate(s.build(), p, q); },
        py::arg("model"), py::arg("p"), py::arg("q"));
  m.def("optimize_profit", [](const ModelSpec& s) { return optimize_profit(s.build()); },
        py::arg("model"), py::call_guard<py::gil_scoped_release>());
  m.def("optimize_welfare", [](const ModelSpec& s) { return optimize_welfare(s.build()); },
        py::arg("model"), py::call_guard<py::gil_scoped_release>());
  m.def("optimize_one_sided",
        [](const ModelSpec& s, const std::string& objective) {
          return optimize_one_sided(s.build(), parse_objective(objective));
        },
        py::arg("model"), py::arg("objective") = "profit");
  m.def("growth_rates", [](const ModelSpec& s) { return growth_rates(s.build()); },
        py::arg("model"), py::call_guard<py::gil_scoped_release>());
  m.def("sensitivity",
        [](const ModelSpec& s, const std::string& parameter, double step) {
          return optimal_price_sensitivity(s.build(), parse_parameter(parameter), step);
        },
        py::arg("model"), py::arg("parameter"), py::arg("step") = 1e-3);
  m.def("run_sweep", &run_sweep, py::arg("scenario"), py::call_guard<py::gil_scoped_release>());
  m.def("price_trend_sweep", &price_trend_sweep, py::arg("scenario"),
        py::call_guard<py::gil_scoped_release>());
}

"""Two-sided pricing on a congested network."""

from ._core import (
    BracketError,
    ConfigError,
    ConvergenceError,
    DegenerateError,
    Model,
    Scenario,
    evaluate,
    fixed_point_equilibrium,
    growth_rates,
    optimize_one_sided,
    optimize_profit,
    optimize_welfare,
    price_trend_sweep,
    run_sweep,
    sensitivity,
    solve_equilibrium,
)

__all__ = [
    "BracketError",
    "ConfigError",
    "ConvergenceError",
    "DegenerateError",
    "Model",
    "Scenario",
    "evaluate",
    "fixed_point_equilibrium",
    "growth_rates",
    "optimize_one_sided",
    "optimize_profit",
    "optimize_welfare",
    "price_trend_sweep",
    "run_sweep",
    "sensitivity",
    "solve_equilibrium",
]

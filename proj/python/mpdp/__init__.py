"""Receding-horizon planning for non-stationary MDPs with imperfect forecasts."""

from ._core import (
    BudgetError,
    ConfigError,
    DimensionError,
    IndexError,
    InputError,
    IoError,
    Mdp,
    RangeError,
    cli,
    contraction_coefficient,
    diameter,
    evaluate_policy,
    mpdp_schedule,
    queueing_mdp,
    random_ergodic_mdp,
    regret_bound,
    run_config,
    solve_optimal,
    span,
    total_variation,
)

__all__ = [
    "BudgetError",
    "ConfigError",
    "DimensionError",
    "IndexError",
    "InputError",
    "IoError",
    "Mdp",
    "RangeError",
    "cli",
    "contraction_coefficient",
    "diameter",
    "evaluate_policy",
    "mpdp_schedule",
    "queueing_mdp",
    "random_ergodic_mdp",
    "regret_bound",
    "run_config",
    "solve_optimal",
    "span",
    "total_variation",
]

"""Planners over a precomputed scenario, all returning a :class:`~orbitsched.plan.Plan`."""

from __future__ import annotations

from ..scenario import Scenario
from ..smdp import SmdpConfig
from .bnb import exact_bnb
from .forward import forward_search
from .graph import graph_dp
from .mcts import MctsConfig, mcts
from .rule import rule_based

SOLVER_NAMES = ("forward", "mcts", "rule", "graph", "bnb")
RESOURCE_FREE_ONLY = ("graph", "bnb")

SMDP_PARAMS = ("gamma", "n_a_max", "literal_duration_reward", "literal_resource_interval", "agility_from_start")
SOLVER_PARAMS = {
    "forward": ("d_solve",),
    "mcts": ("d_solve", "c", "n_sim_max", "seed"),
    "rule": (),
    "graph": (),
    "bnb": ("time_limit_s",),
}


def check_solver_args(name: str, params: dict | None = None, resources: bool = False) -> None:
    """Raise ``ValueError`` for an unknown solver, parameter, or unsupported mode."""
    if name not in SOLVER_NAMES:
        raise ValueError(f"unknown solver {name!r}; choose from {', '.join(SOLVER_NAMES)}")
    if resources and name in RESOURCE_FREE_ONLY:
        raise ValueError(f"solver {name!r} does not support resource modelling")
    params = dict(params or {})
    unknown = set(params) - set(SMDP_PARAMS) - set(SOLVER_PARAMS[name])
    if unknown:
        raise ValueError(f"solver {name!r} does not take parameter(s): {', '.join(sorted(unknown))}")
    SmdpConfig(resources_enabled=resources, **{k: params[k] for k in SMDP_PARAMS if k in params})
    if name == "mcts":
        MctsConfig(**{k: params[k] for k in SOLVER_PARAMS["mcts"] if k in params})
    if name == "forward" and int(params.get("d_solve", 3)) < 1:
        raise ValueError("d_solve must be >= 1")
    if name == "bnb" and not float(params.get("time_limit_s", 60.0)) > 0:
        raise ValueError("time_limit_s must be positive")


def run_solver(name: str, scenario: Scenario, params: dict | None = None, resources: bool = False):
    """Dispatch by name. ``params`` mixes SMDP settings and solver settings."""
    check_solver_args(name, params, resources)
    params = dict(params or {})
    smdp_kw = {k: params[k] for k in SMDP_PARAMS if k in params}
    config = SmdpConfig(resources_enabled=resources, **smdp_kw)
    if name == "forward":
        return forward_search(scenario, config, int(params.get("d_solve", 3)))
    if name == "mcts":
        mc = MctsConfig(**{k: params[k] for k in SOLVER_PARAMS["mcts"] if k in params})
        return mcts(scenario, config, mc)
    if name == "rule":
        return rule_based(scenario, config)
    if name == "graph":
        return graph_dp(scenario, config)
    return exact_bnb(scenario, float(params.get("time_limit_s", 60.0)), config)


__all__ = [
    "MctsConfig",
    "RESOURCE_FREE_ONLY",
    "SOLVER_NAMES",
    "check_solver_args",
    "exact_bnb",
    "forward_search",
    "graph_dp",
    "mcts",
    "rule_based",
    "run_solver",
]

"""Plans: the ordered action list a solver commits to, and its file format."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .scenario import Mode, Scenario, ScenarioError, parse_mode
from .smdp import SmdpAction, SmdpConfig, SmdpState, initial_state, step

SCHEMA_VERSION = 1


@dataclass
class PlanStep:
    action_id: str
    mode: Mode
    t_s: float
    t_e: float
    location_id: Optional[str]
    reward: float
    state: Optional[SmdpState] = None  # state the action was taken from; absent for loaded plans


@dataclass
class Plan:
    steps: list
    total_reward: float
    wall_time_s: float
    solver_name: str
    config_snapshot: dict
    images_collected: int = 0
    collect_reward: float = 0.0
    stats: dict = field(default_factory=dict)

    @property
    def action_ids(self) -> list:
        return [s.action_id for s in self.steps]

    def smdp_config(self) -> SmdpConfig:
        return SmdpConfig.from_dict(self.config_snapshot.get("smdp", {}))

    def discounted_return(self, gamma: Optional[float] = None) -> float:
        """Sum of step rewards, each discounted by the time of the decision that earned it.

        This is the quantity the search planners maximize; ``total_reward``
        is the undiscounted sum of the same step rewards.
        """
        gamma = self.smdp_config().gamma if gamma is None else gamma
        total, t = 0.0, 0.0
        for s in self.steps:
            total += math.pow(gamma, t) * s.reward
            t = s.t_s
        return total


class PlanRecorder:
    """Accumulates (state, action, reward) as a solver executes."""

    def __init__(self, scenario: Scenario, config: SmdpConfig):
        self.scenario = scenario
        self.config = config
        self.state = initial_state(scenario, config)
        self.steps: list[PlanStep] = []
        self.total = 0.0

    def take(self, action: SmdpAction) -> SmdpState:
        before = self.state
        self.state, r = step(before, action, self.scenario, self.config)
        self.total += r
        self.steps.append(
            PlanStep(action.opportunity_id, action.mode, action.t_s, action.t_e, action.location_id, r, before)
        )
        return self.state

    def finish(self, solver_name: str, wall_time_s: float, solver_params: dict, stats: Optional[dict] = None) -> Plan:
        requests = self.scenario.request_index
        collected = self.state.collected
        return Plan(
            steps=self.steps,
            total_reward=self.total,
            wall_time_s=wall_time_s,
            solver_name=solver_name,
            config_snapshot={"smdp": self.config.to_dict(), "solver": dict(solver_params)},
            images_collected=len(collected),
            collect_reward=sum(requests[i].reward for i in collected),
            stats=stats or {},
        )


def replay(scenario: Scenario, config: SmdpConfig, opportunity_ids) -> PlanRecorder:
    rec = PlanRecorder(scenario, config)
    index = scenario.opportunity_index
    for oid in opportunity_ids:
        rec.take(SmdpAction(index[oid]))
    return rec


def plan_to_dict(plan: Plan) -> dict:
    # wall time stays out of the file so reruns are byte-identical
    return {
        "schema_version": SCHEMA_VERSION,
        "solver": plan.solver_name,
        "config": plan.config_snapshot,
        "steps": [
            {
                "action_id": s.action_id,
                "mode": s.mode.value,
                "t_s": s.t_s,
                "t_e": s.t_e,
                "location_id": s.location_id,
                "reward": s.reward,
            }
            for s in plan.steps
        ],
        "stats": plan.stats,
        "totals": {
            "total_reward": plan.total_reward,
            "images_collected": plan.images_collected,
            "collect_reward": plan.collect_reward,
        },
    }


def plan_from_dict(doc: dict) -> Plan:
    if not isinstance(doc, dict) or doc.get("schema_version") != SCHEMA_VERSION:
        raise ScenarioError(f"plan.schema_version: expected {SCHEMA_VERSION}")
    try:
        steps = [
            PlanStep(
                str(s["action_id"]),
                parse_mode(s["mode"]),
                float(s["t_s"]),
                float(s["t_e"]),
                s.get("location_id"),
                float(s.get("reward", 0.0)),
            )
            for s in doc["steps"]
        ]
        totals = doc.get("totals", {})
        return Plan(
            steps=steps,
            total_reward=float(totals.get("total_reward", 0.0)),
            wall_time_s=float(totals.get("wall_time_s", 0.0)),
            solver_name=str(doc.get("solver", "")),
            config_snapshot=dict(doc.get("config", {})),
            images_collected=int(totals.get("images_collected", 0)),
            collect_reward=float(totals.get("collect_reward", 0.0)),
            stats=dict(doc.get("stats", {})),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ScenarioError(f"plan: malformed step or totals ({exc})") from exc


def save_plan(plan: Plan, path) -> None:
    Path(path).write_text(json.dumps(plan_to_dict(plan), indent=1) + "\n")


def load_plan(path) -> Plan:
    text = Path(path).read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    return plan_from_dict(doc)

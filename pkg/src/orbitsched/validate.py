"""Independent replay of a plan against its scenario.

Nothing here calls into the SMDP model or the solvers: time, resource, and
reward bookkeeping are re-derived from the scenario so that a modelling bug
would have to be written twice to slip through.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .plan import Plan
from .scenario import Mode, Scenario

# Slack on timing comparisons; generous relative to the solvers' 1e-9 s.
TIME_TOL_S = 1e-6

VIOLATION_KINDS = ("overlap", "slew", "power", "data", "duplicate-collect", "unknown-opportunity")


@dataclass
class Violation:
    step: int
    kind: str
    detail: str


@dataclass
class ValidationReport:
    feasible: bool
    violations: list = field(default_factory=list)
    recomputed_reward: float = 0.0
    resource_trace: list = field(default_factory=list)  # (t, p, d)
    images_collected: int = 0

    def to_dict(self) -> dict:
        return {
            "feasible": self.feasible,
            "violations": [{"step": v.step, "kind": v.kind, "detail": v.detail} for v in self.violations],
            "recomputed_reward": self.recomputed_reward,
            "images_collected": self.images_collected,
            "trace_points": len(self.resource_trace),
        }


def _angle_deg(u, v) -> float:
    dot = sum(a * b for a, b in zip(u, v))
    nu = math.sqrt(sum(a * a for a in u))
    nv = math.sqrt(sum(b * b for b in v))
    return math.degrees(math.acos(max(-1.0, min(1.0, dot / (nu * nv)))))


def validate(plan: Plan, scenario: Scenario, smdp_config=None) -> ValidationReport:
    """Replay ``plan`` and report every constraint it breaks.

    ``smdp_config`` defaults to the configuration recorded in the plan.
    """
    cfg = smdp_config if smdp_config is not None else plan.smdp_config()
    gamma = cfg.gamma
    resources = cfg.resources_enabled
    sc = scenario.spacecraft
    index = scenario.opportunity_index

    t = 0.0
    t_last_cc = 0.0
    prev_cc = None
    busy_until = 0.0
    p, d = sc.p0, sc.d0
    got: set = set()
    total = 0.0
    trace = [(0.0, p, d)]
    violations = []

    for k, st in enumerate(plan.steps):
        o = index.get(st.action_id)
        if o is None or o.mode != st.mode:
            violations.append(Violation(k, "unknown-opportunity", f"no {st.mode} opportunity {st.action_id!r}"))
            continue
        start = o.t_s
        end = o.pointing_end.t
        if start <= t or start < busy_until - TIME_TOL_S:
            violations.append(
                Violation(k, "overlap", f"starts at {start:.3f} before previous action frees at {max(t, busy_until):.3f}")
            )
        if o.mode != Mode.SUNPOINT and prev_cc is not None:
            ref = prev_cc.pointing_start if cfg.agility_from_start else prev_cc.pointing_end
            need = _angle_deg(ref.direction, o.pointing_start.direction) / sc.slew_rate_deg_s
            have = start - ref.t
            if need > have + TIME_TOL_S:
                violations.append(Violation(k, "slew", f"needs {need:.3f} s of slew, has {have:.3f} s"))

        # resources integrate the chosen mode's rates over the time since the last decision
        p_before, d_before = p, d
        if resources:
            span = start - (t_last_cc if cfg.literal_resource_interval else t)
            p = min(1.0, max(0.0, p + span * sc.power_rates[o.mode]))
            d = min(1.0, max(0.0, d + span * sc.data_rates[o.mode]))

        gained = 0.0
        if o.mode == Mode.COLLECT:
            if o.location_id in got:
                violations.append(Violation(k, "duplicate-collect", f"image {o.location_id} already collected"))
            elif not resources or (p_before > sc.p_min and d_before < sc.d_max):
                got.add(o.location_id)
                gained += gamma ** (start - t) * o.reward
        else:
            width = (start - t) if cfg.literal_duration_reward else (end - start)
            gained += (0.1 if o.mode == Mode.CONTACT else 1e-4) * width

        if resources:
            if p <= sc.p_min:
                gained += -1e4
                violations.append(Violation(k, "power", f"power {p:.4f} at or below minimum {sc.p_min}"))
            if d >= sc.d_max:
                gained += -1e4
                violations.append(Violation(k, "data", f"data {d:.4f} at or above maximum {sc.d_max}"))

        total += gained
        if o.mode != Mode.SUNPOINT:
            t_last_cc = start
            prev_cc = o
        t = start
        busy_until = end
        trace.append((start, p, d))

    return ValidationReport(
        feasible=not violations,
        violations=violations,
        recomputed_reward=total,
        resource_trace=trace,
        images_collected=len(got),
    )


def write_trace_csv(report: ValidationReport, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["t_s", "p", "d"])
        for row in report.resource_trace:
            w.writerow([repr(x) for x in row])


def write_report(report: ValidationReport, path: Optional[str] = None) -> str:
    text = json.dumps(report.to_dict(), indent=1) + "\n"
    if path is not None:
        Path(path).write_text(text)
    return text

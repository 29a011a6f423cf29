"""Greedy rule: take the next action in time when resources allow, else sun-point."""

from __future__ import annotations

import time

from ..plan import Plan, PlanRecorder
from ..scenario import Mode, Scenario
from ..smdp import COLLECT_CONTACT, SmdpConfig, action_space, sunpoint_twin, transition


def telemetry_headroom(t: float, scenario: Scenario) -> float:
    """Data that sun-pointing telemetry adds between ``t`` and the next contact start.

    A collect that leaves the recorder just under its limit would otherwise
    be pushed over by telemetry alone before the next downlink.
    """
    for o in scenario.opportunities[scenario.first_after(t):]:
        if o.mode is Mode.CONTACT:
            return (o.t_s - t) * scenario.spacecraft.data_rates[Mode.SUNPOINT]
    return (scenario.horizon_s - t) * scenario.spacecraft.data_rates[Mode.SUNPOINT]


def naive_select_action(state, scenario: Scenario, config: SmdpConfig):
    acts = action_space(state, scenario, config)
    if not acts:
        return None
    a = acts[0]
    if a.mode not in COLLECT_CONTACT:
        return a
    if config.resources_enabled:
        nxt = transition(state, a, scenario, config)
        sc = scenario.spacecraft
        margin = telemetry_headroom(nxt.t, scenario) if a.mode is Mode.COLLECT else 0.0
        if not (nxt.p > sc.p_min and nxt.d + margin < sc.d_max):
            return sunpoint_twin(a, scenario)
    return a


def rule_based(scenario: Scenario, config: SmdpConfig) -> Plan:
    t0 = time.perf_counter()
    rec = PlanRecorder(scenario, config)
    while True:
        a = naive_select_action(rec.state, scenario, config)
        if a is None:
            break
        rec.take(a)
    return rec.finish("rule", time.perf_counter() - t0, {})

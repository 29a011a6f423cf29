"""Depth-limited exhaustive forward search over the SMDP."""

from __future__ import annotations

import math
import time

from ..plan import Plan, PlanRecorder
from ..scenario import Scenario
from ..smdp import SmdpConfig, action_space, step


def forward_search(scenario: Scenario, config: SmdpConfig, d_solve: int = 3) -> Plan:
    """Replan at every decision epoch with a ``d_solve``-step exhaustive lookahead.

    ``plan.stats["expansions"]`` lists, per executed step, how many
    (state, action) pairs the lookahead evaluated.
    """
    if d_solve < 1:
        raise ValueError(f"d_solve must be >= 1, got {d_solve}")
    t0 = time.perf_counter()
    gamma = config.gamma
    counter = [0]

    def select(state, depth):
        if depth == 0:
            return None, 0.0
        best_a, best_v = None, -math.inf
        for a in action_space(state, scenario, config):
            nxt, r = step(state, a, scenario, config)
            counter[0] += 1
            child_a, child_v = select(nxt, depth - 1)
            # a terminal successor contributes nothing further
            v = r if child_a is None else r + math.pow(gamma, a.t_s - state.t) * child_v
            if v > best_v:
                best_a, best_v = a, v
        return best_a, best_v

    rec = PlanRecorder(scenario, config)
    expansions = []
    while True:
        counter[0] = 0
        a, _ = select(rec.state, d_solve)
        if a is None:
            break
        expansions.append(counter[0])
        rec.take(a)
    return rec.finish(
        "forward",
        time.perf_counter() - t0,
        {"d_solve": d_solve},
        {"expansions": expansions},
    )

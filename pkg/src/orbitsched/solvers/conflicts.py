"""Pairwise agility compatibility between collect opportunities."""

from __future__ import annotations

import numpy as np

from ..astro import SLEW_TOL_S, slew_feasible
from ..scenario import Mode, Scenario


def collect_nodes(scenario: Scenario) -> list:
    """Collect opportunities reachable from the initial state, in (t_s, id) order."""
    return [o for o in scenario.opportunities or () if o.mode is Mode.COLLECT and o.t_s > 0.0]


def compatibility(opps: list, slew_rate_deg_s: float, from_start: bool = False) -> np.ndarray:
    """``ok[i, k]`` is True when ``opps[k]`` may directly follow ``opps[i]`` (i before k).

    Following requires no overlap with the earlier action and a feasible
    slew from its end pointing to the later start pointing. Near-boundary
    entries are re-decided with the scalar check so the matrix agrees with
    the action space exactly.
    """
    n = len(opps)
    if n == 0:
        return np.zeros((0, 0), dtype=bool)
    origins = [o.pointing_start if from_start else o.pointing_end for o in opps]
    d_end = np.array([p.direction for p in origins])
    d_start = np.array([o.pointing_start.direction for o in opps])
    t_end = np.array([p.t for p in origins])
    busy = np.array([o.busy_end for o in opps])
    t_s = np.array([o.t_s for o in opps])

    cosang = np.clip(d_end @ d_start.T, -1.0, 1.0)
    need = np.degrees(np.arccos(cosang)) / slew_rate_deg_s
    gap = t_s[None, :] - t_end[:, None]
    ok = (need <= gap + SLEW_TOL_S) & (busy[:, None] <= t_s[None, :]) & (t_s[:, None] < t_s[None, :])
    ok &= np.triu(np.ones((n, n), dtype=bool), k=1)
    edge = np.argwhere(np.abs(need - gap) < 1e-6)
    for i, k in edge:
        if i < k and busy[i] <= t_s[k] and t_s[i] < t_s[k]:
            ok[i, k] = slew_feasible(origins[i], opps[k].pointing_start, slew_rate_deg_s)
    return ok

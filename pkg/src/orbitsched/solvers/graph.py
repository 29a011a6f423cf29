"""Longest weighted path over the collect-opportunity DAG."""

from __future__ import annotations

import math
import time
from typing import Optional

import numpy as np

from ..plan import Plan, replay
from ..scenario import Scenario
from ..smdp import SmdpConfig
from .conflicts import collect_nodes, compatibility


class PathGraph:
    """Forward edges of a compatibility matrix in a compact form.

    For node ``k`` every earlier node below ``far_cut[k]`` is a valid
    predecessor; the remaining ones are listed in ``near[k]``. Agility
    conflicts are local in time, so ``near`` stays short and the DP runs
    in roughly linear time using a running prefix maximum.
    """

    def __init__(self, ok: np.ndarray):
        n = ok.shape[0]
        self.n = n
        self.far_cut = [0] * n
        self.near = [[] for _ in range(n)]
        for k in range(n):
            col = ok[:k, k]
            c = k if col.all() else int(np.argmin(col))
            self.far_cut[k] = c
            self.near[k] = (np.flatnonzero(col[c:]) + c).tolist()

    def longest_path(self, weights: list) -> tuple[list, list]:
        """Best path value ending at each node and its predecessor.

        ``weights[k] is None`` removes node ``k``. A path is only extended
        when the prefix is worth more than zero.
        """
        n = self.n
        best = [-math.inf] * n
        pred = [-1] * n
        pm_val = [-math.inf] * n
        pm_arg = [-1] * n
        run_val, run_arg = -math.inf, -1
        for k in range(n):
            w = weights[k]
            if w is not None:
                c = self.far_cut[k]
                bp, ba = (pm_val[c - 1], pm_arg[c - 1]) if c > 0 else (-math.inf, -1)
                for i in self.near[k]:
                    if best[i] > bp:
                        bp, ba = best[i], i
                if bp > 0.0:
                    best[k] = w + bp
                    pred[k] = ba
                else:
                    best[k] = w
                if best[k] > run_val:
                    run_val, run_arg = best[k], k
            pm_val[k], pm_arg[k] = run_val, run_arg
        return best, pred


def extract_path(best, pred) -> list[int]:
    """Back-track from the best node; empty when no node has positive value."""
    if len(best) == 0:
        return []
    n = int(np.argmax(best))
    if not best[n] > 0.0:
        return []
    path = []
    while n != -1:
        path.append(n)
        n = int(pred[n])
    path.reverse()
    return path


def propagate_weights(rewards: np.ndarray, ok: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Plain DAG longest path: every node on a path scores its full reward.

    Nodes are in time order and edges only point forward, so each value is
    final before any later node reads it.
    """
    best, pred = PathGraph(ok).longest_path([float(r) for r in rewards])
    return np.array(best, dtype=float), np.array(pred, dtype=int)


def propagate_weights_unique(opps: list, ok: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Longest path where an edge is skipped if its image is already on the predecessor's path.

    Every extracted path visits each image at most once, so its value is
    what the plan actually earns.
    """
    n = len(opps)
    images = {im: b for b, im in enumerate(sorted({o.location_id for o in opps}))}
    bit = [1 << images[o.location_id] for o in opps]
    rewards = np.array([o.reward for o in opps], dtype=float)
    best = rewards.copy()
    pred = np.full(n, -1, dtype=int)
    mask = list(bit)
    for k in range(n):
        cand = np.flatnonzero(ok[:k, k])
        if cand.size:
            order = cand[np.argsort(-best[cand], kind="stable")]
            for i in order:
                if best[i] <= 0.0 or best[i] + rewards[k] <= best[k]:
                    break
                if not mask[i] & bit[k]:
                    best[k] = best[i] + rewards[k]
                    pred[k] = i
                    mask[k] = mask[i] | bit[k]
                    break
    return best, pred


def dedupe_images(opps: list, path: list[int]) -> list[int]:
    """Keep the first visit of each image on a path."""
    seen, out = set(), []
    for i in path:
        if opps[i].location_id not in seen:
            seen.add(opps[i].location_id)
            out.append(i)
    return out


def graph_dp(scenario: Scenario, config: Optional[SmdpConfig] = None) -> Plan:
    """Resource-free planner. ``config`` only sets the discount used when replaying the plan.

    ``stats["path_value"]`` is the plain longest-path value, an upper bound
    on any plan's collect reward.
    """
    config = config or SmdpConfig()
    if config.resources_enabled:
        raise ValueError("graph_dp plans the resource-free problem only")
    t0 = time.perf_counter()
    opps = collect_nodes(scenario)
    ok = compatibility(opps, scenario.spacecraft.slew_rate_deg_s, config.agility_from_start)
    plain, _ = propagate_weights(np.array([o.reward for o in opps], dtype=float), ok)
    best, pred = propagate_weights_unique(opps, ok)
    path = extract_path(best, pred)
    rec = replay(scenario, config, [opps[i].id for i in path])
    stats = {
        "path_value": float(plain.max()) if plain.size else 0.0,
        "unique_path_value": float(best.max()) if best.size else 0.0,
    }
    return rec.finish("graph", time.perf_counter() - t0, {}, stats)

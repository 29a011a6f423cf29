"""Exact conflict packing by depth-first branch and bound.

Binary model: one variable per collect opportunity, at most one opportunity
per image, and no two selected opportunities that are pairwise
incompatible. Every feasible selection is a path in the compatibility DAG,
so the longest path over the still-allowed opportunities bounds a node.
That bound is tightened by pricing the one-per-image constraints into the
path weights with Lagrange multipliers, tuned by projected subgradient
steps and inherited by child nodes.
"""

from __future__ import annotations

import time
from typing import Optional

import numpy as np

from ..plan import Plan, replay
from ..scenario import Scenario
from ..smdp import SmdpConfig
from .conflicts import collect_nodes, compatibility
from .graph import PathGraph, dedupe_images, extract_path, propagate_weights_unique

_EPS = 1e-9
_SUBGRADIENT_ITERS = 30


class _Model:
    def __init__(self, opps: list, ok: np.ndarray):
        n = len(opps)
        self.n = n
        self.rewards = np.array([o.reward for o in opps], dtype=float)
        self.t_s = np.array([o.t_s for o in opps])
        images = sorted({o.location_id for o in opps})
        idx = {im: k for k, im in enumerate(images)}
        self.image = np.array([idx[o.location_id] for o in opps], dtype=int)
        self.n_images = len(images)
        self.ok = ok
        self.graph = PathGraph(ok)
        same_image = self.image[:, None] == self.image[None, :]
        compatible = ok | ok.T
        # conflict: same image or not orderable either way
        self.conflict = (same_image | ~compatible) & ~np.eye(n, dtype=bool)
        # with integral rewards any selection value is integral, so bounds can be floored
        self.integral = bool(np.all(self.rewards == np.round(self.rewards)))

    def path(self, active: np.ndarray, lam: np.ndarray) -> tuple[float, list]:
        w = self.rewards - lam[self.image]
        weights = [float(w[k]) if active[k] else None for k in range(self.n)]
        best, pred = self.graph.longest_path(weights)
        path = extract_path(best, pred)
        return (best[path[-1]] if path else 0.0), path

    def relax(self, active: np.ndarray) -> tuple[float, list]:
        """Plain longest-path bound over ``active`` nodes."""
        return self.path(active, np.zeros(self.n_images))

    def violation(self, path: list) -> Optional[tuple[int, int]]:
        sub = np.array(path, dtype=int)
        if sub.size < 2:
            return None
        block = self.conflict[np.ix_(sub, sub)]
        hits = np.argwhere(np.triu(block, k=1))
        if hits.size == 0:
            return None
        i, j = hits[0]
        return int(sub[i]), int(sub[j])

    def value(self, sel: list) -> float:
        return float(self.rewards[sel].sum()) if sel else 0.0

    def branch_order(self, pair: tuple[int, int]) -> int:
        # descending reward, then ascending start time
        return min(pair, key=lambda v: (-self.rewards[v], self.t_s[v], v))

    def lagrangian(self, active: np.ndarray, lam: np.ndarray, target: float, on_feasible):
        """Tighten the bound at a node.

        Returns ``(bound, lam, path)`` where ``path`` is the last relaxed
        path. ``on_feasible`` is offered every image-unique path found and
        returns the current incumbent value.
        """
        imgs_active = np.zeros(self.n_images, dtype=bool)
        imgs_active[self.image[active]] = True
        lam = np.where(imgs_active, lam, 0.0)
        best_bound, best_lam, path = np.inf, lam, []
        theta, stall = 2.0, 0
        for _ in range(_SUBGRADIENT_ITERS):
            val, path = self.path(active, lam)
            bound = float(lam[imgs_active].sum()) + max(val, 0.0)
            if self.integral:
                bound = float(np.floor(bound + 1e-6))
            if bound < best_bound - 1e-12:
                best_bound, best_lam, stall = bound, lam.copy(), 0
            else:
                stall += 1
                if stall >= 4:
                    theta, stall = theta / 2.0, 0
            primal = dedupe_images_idx(self.image, path)
            if self.violation(primal) is None:
                target = on_feasible(primal)
            if best_bound <= target + _EPS:
                break
            counts = np.bincount(self.image[path], minlength=self.n_images) if path else np.zeros(self.n_images)
            g = 1.0 - counts
            g[~imgs_active] = 0.0
            g[(lam <= 0.0) & (g > 0.0)] = 0.0  # projected: multipliers stay non-negative
            norm = float(g @ g)
            if norm == 0.0:
                break
            lam = np.maximum(0.0, lam - theta * (bound - target) / norm * g)
        return best_bound, best_lam, path


def dedupe_images_idx(image: np.ndarray, path: list) -> list:
    seen, out = set(), []
    for i in path:
        if image[i] not in seen:
            seen.add(image[i])
            out.append(i)
    return out


def solve_packing(opps: list, ok: np.ndarray, time_limit_s: float = 60.0, incumbent: Optional[list] = None):
    """Return ``(selected indices, objective, optimal, nodes)``."""
    m = _Model(opps, ok)
    best = {"sel": list(incumbent or []), "val": m.value(list(incumbent or []))}

    def offer(sel):
        v = m.value(sel)
        if v > best["val"] + _EPS:
            best["sel"], best["val"] = list(sel), v
        return best["val"]

    deadline = time.perf_counter() + time_limit_s
    stack = [(np.ones(m.n, dtype=bool), np.zeros(m.n_images))]
    nodes = 0
    optimal = True
    while stack:
        if time.perf_counter() > deadline:
            optimal = False
            break
        active, lam = stack.pop()
        nodes += 1
        bound, lam, path = m.lagrangian(active, lam, best["val"], offer)
        if bound <= best["val"] + _EPS:
            continue
        pair = m.violation(path)
        if pair is None:
            # the priced path is feasible but not provably optimal; branch on the plain relaxation
            plain_val, plain = m.relax(active)
            pair = m.violation(plain)
            if pair is None:
                offer(plain)
                continue
        v = m.branch_order(pair)
        without = active.copy()
        without[v] = False
        with_v = active & ~m.conflict[v]
        stack.append((without, lam))
        stack.append((with_v, lam))  # explored first
    return sorted(best["sel"]), best["val"], optimal, nodes


def exact_bnb(scenario: Scenario, time_limit_s: float = 60.0, config: Optional[SmdpConfig] = None) -> Plan:
    """Optimal resource-free selection; ``stats["optimal"]`` is False if the time limit hit first."""
    config = config or SmdpConfig()
    if config.resources_enabled:
        raise ValueError("exact_bnb solves the resource-free problem only")
    t0 = time.perf_counter()
    opps = collect_nodes(scenario)
    ok = compatibility(opps, scenario.spacecraft.slew_rate_deg_s, config.agility_from_start)
    # warm start from the image-unique longest path, which is always feasible
    best, pred = propagate_weights_unique(opps, ok)
    warm = dedupe_images(opps, extract_path(best, pred))
    if _Model(opps, ok).violation(warm) is not None:
        warm = []
    selected, objective, optimal, nodes = solve_packing(opps, ok, time_limit_s, warm)
    rec = replay(scenario, config, [opps[i].id for i in selected])
    stats = {"objective": objective, "optimal": optimal, "bnb_nodes": nodes}
    return rec.finish("bnb", time.perf_counter() - t0, {"time_limit_s": time_limit_s}, stats)

"""Monte Carlo tree search over the SMDP with a tree that persists across steps."""

from __future__ import annotations

import math
import random
import time
from dataclasses import asdict, dataclass

from ..plan import Plan, PlanRecorder
from ..scenario import Scenario
from ..smdp import SmdpConfig, SmdpState, action_space, step


@dataclass(frozen=True)
class MctsConfig:
    d_solve: int = 10
    c: float = 3.0
    n_sim_max: int = 100
    seed: int = 0

    def __post_init__(self):
        if self.d_solve < 1:
            raise ValueError("d_solve must be >= 1")
        if self.c < 0:
            raise ValueError("c must be >= 0")
        if self.n_sim_max < 1:
            raise ValueError("n_sim_max must be >= 1")


def state_key(s: SmdpState) -> tuple:
    return (s.t, s.t_s_p, s.prev_id, s.t_free, s.collected, round(s.p, 6), round(s.d, 6))


class _Node:
    __slots__ = ("actions", "n", "q")

    def __init__(self, actions):
        self.actions = actions
        self.n = [0] * len(actions)
        self.q = [0.0] * len(actions)


class SmdpMcts:
    """UCT search; ``tree`` maps a state key to per-action visit counts and values."""

    def __init__(self, scenario: Scenario, config: SmdpConfig, mcts_config: MctsConfig):
        self.scenario = scenario
        self.config = config
        self.mc = mcts_config
        self.rng = random.Random(mcts_config.seed)
        self.tree: dict = {}

    def _actions(self, s):
        return action_space(s, self.scenario, self.config)

    def rollout(self, s: SmdpState, depth: int) -> float:
        total, scale = 0.0, 1.0
        gamma = self.config.gamma
        for _ in range(depth):
            acts = self._actions(s)
            if not acts:
                break
            a = acts[self.rng.randrange(len(acts))]
            nxt, r = step(s, a, self.scenario, self.config)
            total += scale * r
            scale *= math.pow(gamma, a.t_s - s.t)
            s = nxt
        return total

    def _ucb_pick(self, node: _Node) -> int:
        for i, n in enumerate(node.n):
            if n == 0:
                return i
        log_total = math.log(sum(node.n))
        c = self.mc.c
        best_i, best = 0, -math.inf
        for i, (n, q) in enumerate(zip(node.n, node.q)):
            u = q + c * math.sqrt(log_total / n)
            if u > best:
                best_i, best = i, u
        return best_i

    def simulate(self, s: SmdpState, depth: int) -> float:
        if depth == 0:
            return 0.0
        key = state_key(s)
        node = self.tree.get(key)
        if node is None:
            self.tree[key] = _Node(self._actions(s))
            return self.rollout(s, depth)
        if not node.actions:
            return 0.0
        i = self._ucb_pick(node)
        a = node.actions[i]
        nxt, r = step(s, a, self.scenario, self.config)
        q = r + math.pow(self.config.gamma, a.t_s - s.t) * self.simulate(nxt, depth - 1)
        node.n[i] += 1
        node.q[i] += (q - node.q[i]) / node.n[i]
        return q

    def best_action(self, s: SmdpState):
        for _ in range(self.mc.n_sim_max):
            self.simulate(s, self.mc.d_solve)
        node = self.tree.get(state_key(s))
        if node is None or not node.actions:
            return None
        visited = [i for i, n in enumerate(node.n) if n > 0] or [0]
        best = max(visited, key=lambda i: (node.q[i], -i))
        return node.actions[best]


def mcts(scenario: Scenario, config: SmdpConfig, mcts_config: MctsConfig) -> Plan:
    t0 = time.perf_counter()
    search = SmdpMcts(scenario, config, mcts_config)
    rec = PlanRecorder(scenario, config)
    while action_space(rec.state, scenario, config):
        a = search.best_action(rec.state)
        if a is None:
            break
        rec.take(a)
    return rec.finish("mcts", time.perf_counter() - t0, asdict(mcts_config), {"tree_size": len(search.tree)})

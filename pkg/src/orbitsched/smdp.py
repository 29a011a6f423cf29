"""Semi-Markov decision process for single-satellite task planning.

Decisions happen only at opportunity start times. The state tracks the
current decision time, the start of the last collect/contact, the set of
collected images, and the power/data fractions. Two bookkeeping fields ride
along: the id of the last collect/contact opportunity (whose end pointing is
the slew origin) and the time the spacecraft is free again.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Optional

from .astro import slew_feasible
from .scenario import Mode, Opportunity, Scenario

COLLECT_CONTACT = (Mode.COLLECT, Mode.CONTACT)

CONTACT_REWARD_RATE = 1e-1
SUNPOINT_REWARD_RATE = 1e-4
VIOLATION_PENALTY = -1e4


@dataclass(frozen=True)
class SmdpState:
    t: float
    t_s_p: float
    collected: frozenset
    d: float
    p: float
    prev_id: Optional[str] = None
    t_free: float = 0.0


@dataclass(frozen=True)
class SmdpAction:
    opportunity: Opportunity

    @property
    def opportunity_id(self) -> str:
        return self.opportunity.id

    @property
    def mode(self) -> Mode:
        return self.opportunity.mode

    @property
    def t_s(self) -> float:
        return self.opportunity.t_s

    @property
    def t_e(self) -> float:
        return self.opportunity.busy_end

    @property
    def location_id(self) -> Optional[str]:
        return self.opportunity.location_id


@dataclass(frozen=True)
class SmdpConfig:
    """Model switches shared by every solver.

    ``n_a_max=None`` disables action-space truncation. Contacts only enter
    the action space when resources are modelled. The ``literal_*`` and
    ``agility_from_start`` flags select the alternative readings of the
    duration reward, resource interval, and agility reference point.
    """

    gamma: float = 0.999
    n_a_max: Optional[int] = 3
    resources_enabled: bool = False
    literal_duration_reward: bool = False
    literal_resource_interval: bool = False
    agility_from_start: bool = False

    def __post_init__(self):
        if not 0.0 < self.gamma <= 1.0:
            raise ValueError(f"gamma must be in (0, 1], got {self.gamma}")
        if self.n_a_max is not None and self.n_a_max < 1:
            raise ValueError(f"n_a_max must be >= 1, got {self.n_a_max}")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "SmdpConfig":
        return cls(**{k: d[k] for k in cls.__dataclass_fields__ if k in d})


def initial_state(scenario: Scenario, config: SmdpConfig) -> SmdpState:
    sc = scenario.spacecraft
    return SmdpState(t=0.0, t_s_p=0.0, collected=frozenset(), d=sc.d0, p=sc.p0)


def _agile(prev: Optional[Opportunity], o: Opportunity, scenario: Scenario, config: SmdpConfig) -> bool:
    if prev is None or o.mode is Mode.SUNPOINT:
        return True
    origin = prev.pointing_start if config.agility_from_start else prev.pointing_end
    return slew_feasible(origin, o.pointing_start, scenario.spacecraft.slew_rate_deg_s)


def action_space(state: SmdpState, scenario: Scenario, config: SmdpConfig) -> list[SmdpAction]:
    """Earliest feasible actions after ``state.t``, at most ``n_a_max`` of them."""
    opps = scenario.opportunities
    i = scenario.first_after(state.t)
    prev = scenario.opportunity_index[state.prev_id] if state.prev_id is not None else None
    limit = config.n_a_max if config.n_a_max is not None else len(opps)
    out = []
    for k in range(i, len(opps)):
        o = opps[k]
        if o.t_s < state.t_free:
            continue
        if o.mode is Mode.CONTACT and not config.resources_enabled:
            continue
        if o.mode is Mode.COLLECT and o.location_id in state.collected:
            continue
        if not _agile(prev, o, scenario, config):
            continue
        out.append(SmdpAction(o))
        if len(out) >= limit:
            break
    return out


def _can_collect(state: SmdpState, o: Opportunity, scenario: Scenario, config: SmdpConfig) -> bool:
    if o.mode is not Mode.COLLECT or o.location_id in state.collected:
        return False
    if not config.resources_enabled:
        return True
    sc = scenario.spacecraft
    return state.p > sc.p_min and state.d < sc.d_max


def _clamp(x: float) -> float:
    return 0.0 if x < 0.0 else 1.0 if x > 1.0 else x


def transition(state: SmdpState, action: SmdpAction, scenario: Scenario, config: SmdpConfig) -> SmdpState:
    o = action.opportunity
    assert o.t_s > state.t, "action must start after the current decision time"
    mode = o.mode
    p, d = state.p, state.d
    if config.resources_enabled:
        sc = scenario.spacecraft
        dt = o.t_s - (state.t_s_p if config.literal_resource_interval else state.t)
        p = _clamp(p + dt * sc.power_rates[mode])
        d = _clamp(d + dt * sc.data_rates[mode])
    collected = state.collected
    if _can_collect(state, o, scenario, config):
        collected = collected | {o.location_id}
    if mode in COLLECT_CONTACT:
        return SmdpState(o.t_s, o.t_s, collected, d, p, o.id, o.busy_end)
    return SmdpState(o.t_s, state.t_s_p, collected, d, p, state.prev_id, o.busy_end)


def reward(state: SmdpState, action: SmdpAction, scenario: Scenario, config: SmdpConfig) -> float:
    return step(state, action, scenario, config)[1]


def step(state: SmdpState, action: SmdpAction, scenario: Scenario, config: SmdpConfig) -> tuple[SmdpState, float]:
    """Successor state and reward of taking ``action`` in ``state``."""
    nxt = transition(state, action, scenario, config)
    o = action.opportunity
    r = 0.0
    if _can_collect(state, o, scenario, config):
        r += math.pow(config.gamma, o.t_s - state.t) * o.reward
    if o.mode is not Mode.COLLECT:
        span = (o.t_s - state.t) if config.literal_duration_reward else (o.busy_end - o.t_s)
        r += (CONTACT_REWARD_RATE if o.mode is Mode.CONTACT else SUNPOINT_REWARD_RATE) * span
    if config.resources_enabled:
        sc = scenario.spacecraft
        if nxt.p <= sc.p_min:
            r += VIOLATION_PENALTY
        if nxt.d >= sc.d_max:
            r += VIOLATION_PENALTY
    return nxt, r


def discount(config: SmdpConfig, state: SmdpState, action: SmdpAction) -> float:
    return math.pow(config.gamma, action.t_s - state.t)


def sunpoint_twin(action: SmdpAction, scenario: Scenario) -> SmdpAction:
    """The sun-point action covering the same interval as a collect/contact."""
    if action.mode is Mode.SUNPOINT:
        return action
    return SmdpAction(scenario.opportunity_index[action.opportunity_id + "s"])

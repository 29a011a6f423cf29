"""Problem instances: requests, stations, spacecraft, and opportunity windows.

A :class:`Scenario` is immutable once built. Opportunities are computed by
sweeping the access geometry at 1 s and refining every window edge by
bisection, then each collect/contact window is paired with a sun-point twin
covering the same interval.
"""

from __future__ import annotations

import bisect
import json
import math
from dataclasses import dataclass, field, replace
from enum import Enum
from functools import cached_property
from pathlib import Path
from typing import Any, Iterable, Optional, Sequence

import numpy as np

from . import astro
from .astro import GeoPoint, OrbitSpec, PointingVector

SCHEMA_VERSION = 1

SWEEP_STEP_S = 1.0
REFINE_TOL_S = 0.01

DEFAULT_COLLECT_DURATION_S = 30.0
DEFAULT_MAX_OFF_NADIR_DEG = 60.0
DEFAULT_MIN_ELEVATION_DEG = 5.0
DEFAULT_HORIZON_S = 86400.0


class ScenarioError(ValueError):
    """Malformed or inconsistent scenario data."""


class Mode(str, Enum):
    COLLECT = "collect"
    CONTACT = "contact"
    SUNPOINT = "sunpoint"


def parse_mode(value: str) -> Mode:
    try:
        return Mode(value)
    except ValueError:
        raise ScenarioError(f"unknown mode {value!r}; expected one of {[m.value for m in Mode]}") from None


@dataclass(frozen=True)
class ImageRequest:
    id: str
    point: GeoPoint
    reward: float = 1.0
    duration_s: float = DEFAULT_COLLECT_DURATION_S
    max_off_nadir_deg: float = DEFAULT_MAX_OFF_NADIR_DEG

    def __post_init__(self):
        if self.reward < 0:
            raise ScenarioError(f"request {self.id}: reward must be >= 0")
        if self.duration_s <= 0:
            raise ScenarioError(f"request {self.id}: duration_s must be > 0")
        if not 0 < self.max_off_nadir_deg < 90:
            raise ScenarioError(f"request {self.id}: max_off_nadir_deg must be in (0, 90)")


@dataclass(frozen=True)
class GroundStation:
    id: str
    point: GeoPoint
    min_elevation_deg: float = DEFAULT_MIN_ELEVATION_DEG

    def __post_init__(self):
        if not 0 <= self.min_elevation_deg < 90:
            raise ScenarioError(f"station {self.id}: min_elevation_deg must be in [0, 90)")


# One image fills 1% of the recorder over a default-length collect.
_COLLECT_DATA_RATE = 0.01 / DEFAULT_COLLECT_DURATION_S
_TELEMETRY_RATE = 1e-6


def _default_power_rates() -> dict:
    return {Mode.COLLECT: -0.0005, Mode.CONTACT: -0.0005, Mode.SUNPOINT: 0.0002}


def _default_data_rates() -> dict:
    return {
        Mode.COLLECT: _COLLECT_DATA_RATE + _TELEMETRY_RATE,
        Mode.CONTACT: -4.0 * _COLLECT_DATA_RATE + _TELEMETRY_RATE,
        Mode.SUNPOINT: _TELEMETRY_RATE,
    }


@dataclass(frozen=True)
class SpacecraftConfig:
    """Agility and linear resource model.

    Rates are fractions of capacity per second, keyed by :class:`Mode`.
    """

    slew_rate_deg_s: float = 1.0
    power_rates: dict = field(default_factory=_default_power_rates)
    data_rates: dict = field(default_factory=_default_data_rates)
    p_min: float = 0.30
    d_max: float = 0.75
    p0: float = 1.0
    d0: float = 0.0

    def __post_init__(self):
        pr = {parse_mode(getattr(k, "value", k)): float(v) for k, v in self.power_rates.items()}
        dr = {parse_mode(getattr(k, "value", k)): float(v) for k, v in self.data_rates.items()}
        object.__setattr__(self, "power_rates", pr)
        object.__setattr__(self, "data_rates", dr)
        if set(pr) != set(Mode) or set(dr) != set(Mode):
            raise ScenarioError("spacecraft: power_rates and data_rates need all three modes")
        if not (pr[Mode.COLLECT] < 0 and pr[Mode.CONTACT] < 0 and pr[Mode.SUNPOINT] >= 0):
            raise ScenarioError("spacecraft: power rates must satisfy collect<0, contact<0, sunpoint>=0")
        if not (dr[Mode.COLLECT] > 0 and dr[Mode.CONTACT] < 0 and dr[Mode.SUNPOINT] > 0):
            raise ScenarioError("spacecraft: data rates must satisfy collect>0, contact<0, sunpoint>0")
        if not 0 <= self.p_min < self.p0 <= 1:
            raise ScenarioError("spacecraft: need 0 <= p_min < p0 <= 1")
        if not 0 <= self.d0 < self.d_max <= 1:
            raise ScenarioError("spacecraft: need 0 <= d0 < d_max <= 1")
        if self.slew_rate_deg_s <= 0:
            raise ScenarioError("spacecraft: slew_rate_deg_s must be > 0")


@dataclass(frozen=True)
class Opportunity:
    """A window to collect, contact, or sun-point.

    ``t_s``/``t_e`` bound the geometric window. The action taken from it
    starts at ``t_s`` and holds the spacecraft until ``pointing_end.t``
    (``busy_end``), which for collects is ``t_s`` plus the collect duration.
    Sun-point twins carry their parent's pointings and busy interval.
    """

    id: str
    mode: Mode
    location_id: Optional[str]
    t_s: float
    t_e: float
    reward: float
    pointing_start: PointingVector
    pointing_end: PointingVector

    def __post_init__(self):
        if not self.t_s < self.t_e:
            raise ScenarioError(f"opportunity {self.id}: t_s ({self.t_s}) must be < t_e ({self.t_e})")
        if (self.mode is Mode.SUNPOINT) != (self.location_id is None):
            raise ScenarioError(f"opportunity {self.id}: location_id must be null exactly for sunpoint")

    @property
    def busy_end(self) -> float:
        return self.pointing_end.t


@dataclass(frozen=True)
class Scenario:
    orbit: OrbitSpec
    spacecraft: SpacecraftConfig
    requests: tuple
    stations: tuple
    horizon_s: float
    opportunities: Optional[tuple] = None

    def __post_init__(self):
        object.__setattr__(self, "requests", tuple(self.requests))
        object.__setattr__(self, "stations", tuple(self.stations))
        if self.horizon_s <= 0:
            raise ScenarioError("horizon_s must be > 0")
        if self.opportunities is None:
            return
        opps = tuple(self.opportunities)
        object.__setattr__(self, "opportunities", opps)
        req_ids = {r.id for r in self.requests}
        sta_ids = {g.id for g in self.stations}
        prev = None
        for o in opps:
            if o.t_s < 0 or o.t_e > self.horizon_s + 1e-9:
                raise ScenarioError(f"opportunity {o.id}: outside horizon [0, {self.horizon_s}]")
            if o.mode is Mode.COLLECT and o.location_id not in req_ids:
                raise ScenarioError(f"opportunity {o.id}: unknown request {o.location_id!r}")
            if o.mode is Mode.CONTACT and o.location_id not in sta_ids:
                raise ScenarioError(f"opportunity {o.id}: unknown station {o.location_id!r}")
            if prev is not None and (o.t_s, o.id) < (prev.t_s, prev.id):
                raise ScenarioError(f"opportunity {o.id}: not sorted by (t_s, id)")
            prev = o

    @cached_property
    def start_times(self) -> list:
        return [o.t_s for o in self.opportunities or ()]

    @cached_property
    def opportunity_index(self) -> dict:
        return {o.id: o for o in self.opportunities or ()}

    @cached_property
    def request_index(self) -> dict:
        return {r.id: r for r in self.requests}

    def first_after(self, t: float) -> int:
        """Index of the first opportunity with ``t_s > t``."""
        return bisect.bisect_right(self.start_times, t)

    def collects(self) -> list:
        return [o for o in self.opportunities or () if o.mode is Mode.COLLECT]


DEFAULT_STATIONS = (
    GroundStation("svalbard", GeoPoint(78.23, 15.41)),
    GroundStation("fairbanks", GeoPoint(64.86, -147.85)),
    GroundStation("mcmurdo", GeoPoint(-77.85, 166.67)),
)


def sample_locations(n: int, seed: int) -> list[GeoPoint]:
    """Uniform lat in [-70, 70], lon in [-180, 180), reproducible per seed."""
    if n <= 0:
        raise ValueError(f"n must be positive, got {n}")
    rng = np.random.default_rng(seed)
    lat = rng.uniform(-70.0, 70.0, size=n)
    lon = rng.uniform(-180.0, 180.0, size=n)
    return [GeoPoint(float(a), float(b)) for a, b in zip(lat, lon)]


def make_scenario(
    n_locations: int,
    seed: int,
    horizon_s: float = DEFAULT_HORIZON_S,
    stations: Optional[Sequence[GroundStation]] = None,
    orbit: Optional[OrbitSpec] = None,
    spacecraft: Optional[SpacecraftConfig] = None,
    max_off_nadir_deg: float = DEFAULT_MAX_OFF_NADIR_DEG,
) -> Scenario:
    """Random scenario without opportunities."""
    points = sample_locations(n_locations, seed)
    requests = [
        ImageRequest(id=f"img{k:05d}", point=p, max_off_nadir_deg=max_off_nadir_deg)
        for k, p in enumerate(points)
    ]
    return Scenario(
        orbit=orbit or OrbitSpec(),
        spacecraft=spacecraft or SpacecraftConfig(),
        requests=requests,
        stations=DEFAULT_STATIONS if stations is None else stations,
        horizon_s=horizon_s,
    )


# ---------------------------------------------------------------------------
# access computation


def _central_angle_limit(sat_radius: float, site_radius: float, *, off_nadir_deg=None, elevation_deg=None) -> float:
    """Largest Earth-central angle between sub-satellite point and site meeting the cone."""
    horizon = math.acos(min(1.0, site_radius / sat_radius))
    if off_nadir_deg is not None:
        eta = math.radians(off_nadir_deg)
        s = sat_radius / site_radius * math.sin(eta)
        if s >= 1.0:
            return horizon
        return min(horizon, math.asin(s) - eta)
    el = math.radians(elevation_deg)
    return math.acos(site_radius / sat_radius * math.cos(el)) - el


def _sweep_predicate(kind: str, sat: np.ndarray, site: np.ndarray, limit_deg: float) -> np.ndarray:
    """Vectorised geometric predicate over ECEF samples (rows of ``sat``)."""
    los = site[None, :] - sat
    up = site / np.linalg.norm(site)
    visible = (los @ up) < 0.0  # satellite above the site horizon
    if kind == "collect":
        nadir = -sat
        cosang = np.einsum("ij,ij->i", nadir, los) / (np.linalg.norm(nadir, axis=1) * np.linalg.norm(los, axis=1))
        ang = np.degrees(np.arccos(np.clip(cosang, -1.0, 1.0)))
        return visible & (ang <= limit_deg)
    sin_el = -(los @ up) / np.linalg.norm(los, axis=1)
    return np.degrees(np.arcsin(np.clip(sin_el, -1.0, 1.0))) >= limit_deg


def window_predicate(orbit: OrbitSpec, kind: str, point: GeoPoint, limit_deg: float, t: float) -> bool:
    """Scalar form of the access predicate, used for edge refinement."""
    sat = astro.propagate(orbit, t)
    if kind == "collect":
        return astro.is_visible(sat, point, t) and astro.off_nadir_angle(sat, point, t) <= limit_deg
    return astro.elevation_angle(sat, point, t) >= limit_deg


def _refine(pred, t_false: float, t_true: float) -> float:
    while abs(t_true - t_false) > REFINE_TOL_S:
        mid = 0.5 * (t_true + t_false)
        if pred(mid):
            t_true = mid
        else:
            t_false = mid
    return t_true


def _runs(mask: np.ndarray) -> list[tuple[int, int]]:
    """Inclusive index ranges of contiguous True runs."""
    padded = np.concatenate(([False], mask, [False]))
    d = np.diff(padded.astype(np.int8))
    starts = np.flatnonzero(d == 1)
    ends = np.flatnonzero(d == -1) - 1
    return list(zip(starts.tolist(), ends.tolist()))


def access_windows(
    orbit: OrbitSpec,
    sites: Sequence[tuple[GeoPoint, float]],
    kind: str,
    horizon_s: float,
) -> list[list[tuple[float, float]]]:
    """Maximal access windows for each ``(point, limit_deg)`` site.

    ``kind`` is ``"collect"`` (limit is max off-nadir) or ``"contact"``
    (limit is min elevation).
    """
    times = np.arange(0.0, horizon_s + SWEEP_STEP_S, SWEEP_STEP_S)
    times = times[times <= horizon_s]
    if times[-1] < horizon_s:
        times = np.append(times, horizon_s)
    sat_ecef = astro.eci_to_ecef_many(astro.propagate_many(orbit, times), times)
    sat_r = orbit.semi_major_axis_km
    sat_unit = sat_ecef / sat_r

    out: list[list[tuple[float, float]]] = [[] for _ in sites]
    chunk = 64
    for c0 in range(0, len(sites), chunk):
        block = sites[c0:c0 + chunk]
        site_vecs = np.array([astro.site_ecef(p) for p, _ in block])
        site_r = np.linalg.norm(site_vecs, axis=1)
        cos_ca = sat_unit @ (site_vecs / site_r[:, None]).T
        for j, (point, limit) in enumerate(block):
            if kind == "collect":
                lam = _central_angle_limit(sat_r, site_r[j], off_nadir_deg=limit)
            else:
                lam = _central_angle_limit(sat_r, site_r[j], elevation_deg=limit)
            # loose prefilter; the exact predicate decides
            cand = np.flatnonzero(cos_ca[:, j] >= math.cos(min(math.pi, lam + 0.01)))
            if cand.size == 0:
                continue
            mask = np.zeros(times.size, dtype=bool)
            mask[cand] = _sweep_predicate(kind, sat_ecef[cand], site_vecs[j], limit)

            def pred(t, point=point, limit=limit):
                return window_predicate(orbit, kind, point, limit, t)

            for i0, i1 in _runs(mask):
                t_s = times[i0] if i0 == 0 else _refine(pred, times[i0 - 1], times[i0])
                t_e = times[i1] if i1 == times.size - 1 else _refine(pred, times[i1 + 1], times[i1])
                if t_e > t_s:
                    out[c0 + j].append((float(t_s), float(t_e)))
    return out


def compute_opportunities(scenario: Scenario) -> list[Opportunity]:
    """Collect, contact, and sun-point opportunities sorted by (t_s, id)."""
    orbit = scenario.orbit
    raw = []  # (t_s, mode rank, location id, t_e, mode, busy_end, point, reward)
    req_windows = access_windows(
        orbit, [(r.point, r.max_off_nadir_deg) for r in scenario.requests], "collect", scenario.horizon_s
    )
    for req, wins in zip(scenario.requests, req_windows):
        for t_s, t_e in wins:
            busy = t_s + min(req.duration_s, t_e - t_s)
            raw.append((t_s, 0, req.id, t_e, Mode.COLLECT, busy, req.point, req.reward))
    sta_windows = access_windows(
        orbit, [(g.point, g.min_elevation_deg) for g in scenario.stations], "contact", scenario.horizon_s
    )
    for sta, wins in zip(scenario.stations, sta_windows):
        for t_s, t_e in wins:
            raw.append((t_s, 1, sta.id, t_e, Mode.CONTACT, t_e, sta.point, 0.0))
    raw.sort(key=lambda r: r[:3])

    opps = []
    for k, (t_s, _, loc, t_e, mode, busy, point, reward) in enumerate(raw):
        p_start = astro.pointing_to(orbit, point, t_s)
        p_end = astro.pointing_to(orbit, point, busy)
        oid = f"{k:06d}"
        opps.append(Opportunity(oid, mode, loc, t_s, t_e, reward, p_start, p_end))
        opps.append(Opportunity(oid + "s", Mode.SUNPOINT, None, t_s, t_e, 0.0, p_start, p_end))
    return opps


def with_opportunities(scenario: Scenario) -> Scenario:
    if scenario.opportunities is not None:
        return scenario
    return replace(scenario, opportunities=tuple(compute_opportunities(scenario)))


def random_instance(
    n: int,
    seed: int,
    n_images: Optional[int] = None,
    span_s: float = 600.0,
    spacecraft: Optional[SpacecraftConfig] = None,
    n_contacts: int = 0,
    cone_deg: float = 40.0,
) -> Scenario:
    """Small synthetic instance with random windows and pointings.

    Used by tests and oracles: ``n`` collect windows over ``n_images`` images
    (fewer images than windows exercises the one-collect-per-image rule),
    optional contact windows, and a sun-point twin for each.
    """
    rng = np.random.default_rng(seed)
    n_images = n_images or max(1, (2 * n) // 3)
    requests = [
        ImageRequest(f"img{k:03d}", GeoPoint(0.0, 0.0), reward=float(rng.integers(1, 4)))
        for k in range(n_images)
    ]
    stations = [GroundStation(f"gs{k}", GeoPoint(0.0, 0.0)) for k in range(n_contacts)]

    def direction():
        # random direction inside a cone around -z (nadir)
        th = math.radians(cone_deg) * math.sqrt(rng.uniform())
        ph = rng.uniform(0, 2 * math.pi)
        return (math.sin(th) * math.cos(ph), math.sin(th) * math.sin(ph), -math.cos(th))

    raw = []
    for k in range(n + n_contacts):
        t_s = float(np.round(rng.uniform(1.0, span_s), 2))
        length = float(np.round(rng.uniform(10.0, 90.0), 2))
        if k < n:
            mode, loc = Mode.COLLECT, requests[int(rng.integers(n_images))].id
            busy = t_s + min(DEFAULT_COLLECT_DURATION_S, length)
        else:
            mode, loc = Mode.CONTACT, stations[k - n].id
            busy = t_s + length
        raw.append((t_s, loc, mode, t_s + length, busy, direction(), direction()))
    raw.sort(key=lambda r: (r[0], r[2] is Mode.CONTACT, r[1]))
    reward_of = {r.id: r.reward for r in requests}
    opps = []
    for k, (t_s, loc, mode, t_e, busy, d0, d1) in enumerate(raw):
        ps, pe = PointingVector(d0, t_s), PointingVector(d1, busy)
        reward = reward_of.get(loc, 0.0) if mode is Mode.COLLECT else 0.0
        oid = f"{k:06d}"
        opps.append(Opportunity(oid, mode, loc, t_s, t_e, reward, ps, pe))
        opps.append(Opportunity(oid + "s", Mode.SUNPOINT, None, t_s, t_e, 0.0, ps, pe))
    horizon = max([o.t_e for o in opps], default=span_s) + 1.0
    return Scenario(OrbitSpec(), spacecraft or SpacecraftConfig(), requests, stations, horizon, tuple(opps))


# ---------------------------------------------------------------------------
# file I/O


def _point_to_dict(p: GeoPoint) -> dict:
    return {"lat_deg": p.lat_deg, "lon_deg": p.lon_deg, "alt_m": p.alt_m}


def _pointing_to_dict(p: PointingVector) -> dict:
    return {"direction": list(p.direction), "t": p.t}


def scenario_to_dict(s: Scenario) -> dict:
    sc = s.spacecraft
    doc: dict[str, Any] = {
        "schema_version": SCHEMA_VERSION,
        "orbit": {
            "altitude_km": s.orbit.altitude_km,
            "inclination_deg": s.orbit.inclination_deg,
            "raan_deg": s.orbit.raan_deg,
            "arg_lat_epoch_deg": s.orbit.arg_lat_epoch_deg,
            "epoch": s.orbit.epoch,
        },
        "spacecraft": {
            "slew_rate_deg_s": sc.slew_rate_deg_s,
            "power_rates": {m.value: v for m, v in sc.power_rates.items()},
            "data_rates": {m.value: v for m, v in sc.data_rates.items()},
            "p_min": sc.p_min,
            "d_max": sc.d_max,
            "p0": sc.p0,
            "d0": sc.d0,
        },
        "requests": [
            {
                "id": r.id,
                "point": _point_to_dict(r.point),
                "reward": r.reward,
                "duration_s": r.duration_s,
                "max_off_nadir_deg": r.max_off_nadir_deg,
            }
            for r in s.requests
        ],
        "stations": [
            {"id": g.id, "point": _point_to_dict(g.point), "min_elevation_deg": g.min_elevation_deg}
            for g in s.stations
        ],
        "horizon_s": s.horizon_s,
    }
    if s.opportunities is not None:
        doc["opportunities"] = [
            {
                "id": o.id,
                "mode": o.mode.value,
                "location_id": o.location_id,
                "t_s": o.t_s,
                "t_e": o.t_e,
                "reward": o.reward,
                "pointing_start": _pointing_to_dict(o.pointing_start),
                "pointing_end": _pointing_to_dict(o.pointing_end),
            }
            for o in s.opportunities
        ]
    return doc


class _Reader:
    """Field access with path-qualified error messages."""

    def __init__(self, data, path: str):
        self.data = data
        self.path = path

    def get(self, key, kind=float, default=...):
        if not isinstance(self.data, dict):
            raise ScenarioError(f"{self.path}: expected an object")
        if key not in self.data:
            if default is ...:
                raise ScenarioError(f"{self.path}.{key}: missing field")
            return default
        value = self.data[key]
        try:
            if kind is float:
                return float(value)
            if kind is str:
                if not isinstance(value, str):
                    raise TypeError
                return value
            return kind(value)
        except (TypeError, ValueError) as exc:
            raise ScenarioError(f"{self.path}.{key}: invalid value {value!r}") from exc

    def sub(self, key):
        if not isinstance(self.data, dict) or key not in self.data:
            raise ScenarioError(f"{self.path}.{key}: missing field")
        return _Reader(self.data[key], f"{self.path}.{key}")

    def items(self, key, optional=False):
        if optional and (not isinstance(self.data, dict) or self.data.get(key) is None):
            return None
        seq = self.sub(key).data
        if not isinstance(seq, list):
            raise ScenarioError(f"{self.path}.{key}: expected a list")
        return [_Reader(x, f"{self.path}.{key}[{i}]") for i, x in enumerate(seq)]


def _read_point(r: _Reader) -> GeoPoint:
    try:
        return GeoPoint(r.get("lat_deg"), r.get("lon_deg"), r.get("alt_m", default=0.0))
    except ValueError as exc:
        raise ScenarioError(f"{r.path}: {exc}") from exc


def _read_pointing(r: _Reader) -> PointingVector:
    d = r.sub("direction").data
    if not (isinstance(d, list) and len(d) == 3):
        raise ScenarioError(f"{r.path}.direction: expected 3 numbers")
    try:
        return PointingVector(tuple(float(x) for x in d), r.get("t"))
    except (TypeError, ValueError) as exc:
        raise ScenarioError(f"{r.path}: {exc}") from exc


def scenario_from_dict(doc: dict) -> Scenario:
    root = _Reader(doc, "scenario")
    version = root.get("schema_version", int)
    if version != SCHEMA_VERSION:
        raise ScenarioError(f"scenario.schema_version: unsupported version {version}, expected {SCHEMA_VERSION}")
    o = root.sub("orbit")
    try:
        orbit = OrbitSpec(
            o.get("altitude_km"),
            o.get("inclination_deg"),
            o.get("raan_deg", default=0.0),
            o.get("arg_lat_epoch_deg", default=0.0),
            o.get("epoch", default=0.0),
        )
    except ValueError as exc:
        raise ScenarioError(f"scenario.orbit: {exc}") from exc
    s = root.sub("spacecraft")
    spacecraft = SpacecraftConfig(
        slew_rate_deg_s=s.get("slew_rate_deg_s"),
        power_rates=dict(s.sub("power_rates").data),
        data_rates=dict(s.sub("data_rates").data),
        p_min=s.get("p_min"),
        d_max=s.get("d_max"),
        p0=s.get("p0"),
        d0=s.get("d0"),
    )
    requests = [
        ImageRequest(
            r.get("id", str),
            _read_point(r.sub("point")),
            r.get("reward", default=1.0),
            r.get("duration_s", default=DEFAULT_COLLECT_DURATION_S),
            r.get("max_off_nadir_deg", default=DEFAULT_MAX_OFF_NADIR_DEG),
        )
        for r in root.items("requests")
    ]
    stations = [
        GroundStation(g.get("id", str), _read_point(g.sub("point")), g.get("min_elevation_deg", default=DEFAULT_MIN_ELEVATION_DEG))
        for g in root.items("stations")
    ]
    opps = None
    opp_readers = root.items("opportunities", optional=True)
    if opp_readers is not None:
        opps = []
        for r in opp_readers:
            loc = r.data.get("location_id") if isinstance(r.data, dict) else None
            opps.append(
                Opportunity(
                    r.get("id", str),
                    parse_mode(r.get("mode", str)),
                    loc,
                    r.get("t_s"),
                    r.get("t_e"),
                    r.get("reward", default=0.0),
                    _read_pointing(r.sub("pointing_start")),
                    _read_pointing(r.sub("pointing_end")),
                )
            )
    return Scenario(orbit, spacecraft, requests, stations, root.get("horizon_s"), opps)


def save_scenario(scenario: Scenario, path) -> None:
    Path(path).write_text(json.dumps(scenario_to_dict(scenario), indent=1) + "\n")


def load_scenario(path) -> Scenario:
    text = Path(path).read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    return scenario_from_dict(doc)


def load_stations(path) -> list[GroundStation]:
    """Station list file: a JSON array of station objects as in the scenario schema."""
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    if not isinstance(data, list):
        raise ScenarioError(f"{path}: expected a list of stations")
    readers = [_Reader(x, f"stations[{i}]") for i, x in enumerate(data)]
    return [
        GroundStation(g.get("id", str), _read_point(g.sub("point")), g.get("min_elevation_deg", default=DEFAULT_MIN_ELEVATION_DEG))
        for g in readers
    ]


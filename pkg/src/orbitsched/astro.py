"""Two-body circular orbit propagation and access geometry.

The Earth is a sphere rotating at a constant rate about the inertial z-axis,
with zero rotation angle at t = 0. Inertial and Earth-fixed frames therefore
coincide at the scenario epoch.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

MU_EARTH = 398600.4418  # km^3/s^2
R_EARTH = 6378.137  # km
OMEGA_EARTH = 7.2921159e-5  # rad/s
SLEW_TOL_S = 1e-9  # absorbs round-off in the boundary-inclusive slew test


@dataclass(frozen=True)
class OrbitSpec:
    altitude_km: float = 500.0
    inclination_deg: float = 90.0
    raan_deg: float = 0.0
    arg_lat_epoch_deg: float = 0.0
    epoch: float = 0.0

    def __post_init__(self):
        if not self.altitude_km > 0:
            raise ValueError(f"altitude_km must be positive, got {self.altitude_km}")
        if not 0.0 <= self.inclination_deg <= 180.0:
            raise ValueError(f"inclination_deg out of [0, 180]: {self.inclination_deg}")
        object.__setattr__(self, "raan_deg", self.raan_deg % 360.0)
        object.__setattr__(self, "arg_lat_epoch_deg", self.arg_lat_epoch_deg % 360.0)

    @property
    def semi_major_axis_km(self) -> float:
        return R_EARTH + self.altitude_km

    @property
    def mean_motion(self) -> float:
        """Mean motion in rad/s."""
        return math.sqrt(MU_EARTH / self.semi_major_axis_km**3)

    @property
    def period_s(self) -> float:
        return 2.0 * math.pi / self.mean_motion


@dataclass(frozen=True)
class GeoPoint:
    lat_deg: float
    lon_deg: float
    alt_m: float = 0.0

    def __post_init__(self):
        if not -90.0 <= self.lat_deg <= 90.0:
            raise ValueError(f"latitude out of range: {self.lat_deg}")
        lon = (self.lon_deg + 180.0) % 360.0 - 180.0
        object.__setattr__(self, "lon_deg", lon)


@dataclass(frozen=True)
class EciState:
    position: np.ndarray
    velocity: np.ndarray
    t: float


@dataclass(frozen=True)
class PointingVector:
    direction: tuple[float, float, float]
    t: float

    def __post_init__(self):
        v = np.asarray(self.direction, dtype=float)
        n = np.linalg.norm(v)
        if n == 0.0:
            raise ValueError("pointing direction must be non-zero")
        if abs(n - 1.0) > 1e-13:
            v = v / n
        object.__setattr__(self, "direction", tuple(float(x) for x in v))


def _orbit_basis(orbit: OrbitSpec) -> tuple[np.ndarray, np.ndarray]:
    """Unit vectors of the orbital plane: toward the ascending node, and 90 deg ahead of it."""
    raan = math.radians(orbit.raan_deg)
    inc = math.radians(orbit.inclination_deg)
    p = np.array([math.cos(raan), math.sin(raan), 0.0])
    q = np.array([
        -math.sin(raan) * math.cos(inc),
        math.cos(raan) * math.cos(inc),
        math.sin(inc),
    ])
    return p, q


def argument_of_latitude(orbit: OrbitSpec, t):
    return math.radians(orbit.arg_lat_epoch_deg) + orbit.mean_motion * (np.asarray(t, dtype=float) - orbit.epoch)


def propagate(orbit: OrbitSpec, t: float) -> EciState:
    """Position (km) and velocity (km/s) on the circular orbit at time ``t``."""
    if t < 0:
        raise ValueError(f"t must be non-negative, got {t}")
    p, q = _orbit_basis(orbit)
    u = float(argument_of_latitude(orbit, t))
    a = orbit.semi_major_axis_km
    v = a * orbit.mean_motion
    pos = a * (math.cos(u) * p + math.sin(u) * q)
    vel = v * (-math.sin(u) * p + math.cos(u) * q)
    return EciState(position=pos, velocity=vel, t=float(t))


def propagate_many(orbit: OrbitSpec, times: np.ndarray) -> np.ndarray:
    """Vectorised positions, shape (len(times), 3)."""
    p, q = _orbit_basis(orbit)
    u = argument_of_latitude(orbit, times)[:, None]
    return orbit.semi_major_axis_km * (np.cos(u) * p + np.sin(u) * q)


def site_ecef(site: GeoPoint) -> np.ndarray:
    r = R_EARTH + site.alt_m / 1000.0
    lat = math.radians(site.lat_deg)
    lon = math.radians(site.lon_deg)
    return r * np.array([math.cos(lat) * math.cos(lon), math.cos(lat) * math.sin(lon), math.sin(lat)])


def site_eci(site: GeoPoint, t: float) -> np.ndarray:
    return ecef_to_eci(site_ecef(site), t)


def ecef_to_eci(vec: np.ndarray, t: float) -> np.ndarray:
    th = OMEGA_EARTH * t
    c, s = math.cos(th), math.sin(th)
    x, y, z = vec
    return np.array([c * x - s * y, s * x + c * y, z])


def eci_to_ecef_many(pos: np.ndarray, times: np.ndarray) -> np.ndarray:
    th = OMEGA_EARTH * np.asarray(times, dtype=float)
    c, s = np.cos(th), np.sin(th)
    out = np.empty_like(pos)
    out[:, 0] = c * pos[:, 0] + s * pos[:, 1]
    out[:, 1] = -s * pos[:, 0] + c * pos[:, 1]
    out[:, 2] = pos[:, 2]
    return out


def _angle_deg(a: np.ndarray, b: np.ndarray) -> float:
    # atan2 form stays accurate near 0 and 180 deg
    cross = np.linalg.norm(np.cross(a, b))
    return math.degrees(math.atan2(cross, float(np.dot(a, b))))


def elevation_angle(sat: EciState, site: GeoPoint, t: float) -> float:
    """Elevation of the satellite above the site's local horizon, degrees."""
    r_site = site_eci(site, t)
    rho = np.asarray(sat.position) - r_site
    up = r_site / np.linalg.norm(r_site)
    s = float(np.dot(rho, up) / np.linalg.norm(rho))
    return math.degrees(math.asin(max(-1.0, min(1.0, s))))


def off_nadir_angle(sat: EciState, target: GeoPoint, t: float) -> float:
    """Angle between nadir and the satellite-to-target line of sight, degrees."""
    pos = np.asarray(sat.position)
    los = site_eci(target, t) - pos
    return _angle_deg(-pos, los)


def is_visible(sat: EciState, site: GeoPoint, t: float) -> bool:
    """True when the site is on the near side of the Earth (positive elevation)."""
    return elevation_angle(sat, site, t) > 0.0


def pointing_to(orbit: OrbitSpec, site: GeoPoint, t: float) -> PointingVector:
    sat = propagate(orbit, t)
    los = site_eci(site, t) - sat.position
    return PointingVector(direction=tuple(los), t=float(t))


def slew_angle_deg(p1: PointingVector, p2: PointingVector) -> float:
    # pure-python on tuples: this sits in the solvers' inner loop
    ax, ay, az = p1.direction
    bx, by, bz = p2.direction
    cx, cy, cz = ay * bz - az * by, az * bx - ax * bz, ax * by - ay * bx
    return math.degrees(math.atan2(math.sqrt(cx * cx + cy * cy + cz * cz), ax * bx + ay * by + az * bz))


def slew_feasible(p1: PointingVector, p2: PointingVector, slew_rate_deg_s: float) -> bool:
    """Agility check between two pointings: the eigen-axis slew fits in the time gap."""
    gap = p2.t - p1.t
    if gap < 0:
        return False
    return slew_angle_deg(p1, p2) / slew_rate_deg_s <= gap + SLEW_TOL_S

"""Near-zone limits, enhancement ratios and far-zone oscillation diagnostics."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .core import (
    SYMMETRIC,
    AtomOnOrBehindMirror,
    BellParity,
    DipoleLike,
    PairGeometry,
    ResonanceError,
    ZeroSeparation,
    as_vector,
)
from .mirror import total_energy

NEAR_THRESHOLD = 1e-2
FAR_THRESHOLD = 10.0

_FOUR_PI = 4.0 * math.pi


class FreeSpacePartZero(ResonanceError, ZeroDivisionError):
    pass


class EmptyScanRange(ResonanceError, ValueError):
    pass


class Regime(enum.Enum):
    NEAR_ZONE = "near"
    FAR_ZONE = "far"
    INTERMEDIATE = "intermediate"


@dataclass(frozen=True)
class ZoneClassification:
    regime: Regime
    k_sep: float
    k_image: float


def classify_zone(k0: float, geometry: PairGeometry, near_threshold: float = NEAR_THRESHOLD,
                  far_threshold: float = FAR_THRESHOLD) -> ZoneClassification:
    """Advisory regime label from k0 times the interatomic and image distances."""
    k_sep = k0 * geometry.distance
    k_image = k0 * geometry.image_distance
    if k_sep < near_threshold and k_image < near_threshold:
        regime = Regime.NEAR_ZONE
    elif k_sep > far_threshold:
        regime = Regime.FAR_ZONE
    else:
        regime = Regime.INTERMEDIATE
    return ZoneClassification(regime, k_sep, k_image)


def _check(sep, z):
    if not sep > 0:
        raise ZeroSeparation(f"interatomic distance must be positive, got {sep}")
    if not z > 0:
        raise AtomOnOrBehindMirror(f"atom-mirror distance must be positive, got {z}")


def near_zone_perpendicular(mu_a: DipoleLike, mu_b: DipoleLike, L: float, z: float,
                            parity: BellParity = SYMMETRIC) -> float:
    """k0 -> 0 limit of the total shift for the stacked pair."""
    _check(L, z)
    a, b = as_vector(mu_a), as_vector(mu_b)
    R = L + 2.0 * z
    transverse = a[0] * b[0] + a[1] * b[1]
    value = transverse * (1 / L**3 - 1 / R**3) - 2 * a[2] * b[2] * (1 / L**3 + 1 / R**3)
    return float(parity.sign * value / _FOUR_PI)


def near_zone_parallel(mu_a: DipoleLike, mu_b: DipoleLike, D: float, z: float,
                       parity: BellParity = SYMMETRIC) -> float:
    """k0 -> 0 limit of the total shift for the pair at common height.

    This is the limit of the full boundary expression, so the yy mirror term
    goes as (D^2 - 2z^2)/R^5 with R the image distance.
    """
    _check(D, z)
    a, b = as_vector(mu_a), as_vector(mu_b)
    R = math.sqrt(D * D + 4 * z * z)
    value = (a[0] * b[0] * (1 / D**3 - 1 / R**3)
             + a[1] * b[1] * (-2 / D**3 + 2 * (D * D - 2 * z * z) / R**5)
             + a[2] * b[2] * (1 / D**3 + (D * D - 8 * z * z) / R**5)
             + (a[1] * b[2] - a[2] * b[1]) * 6 * z * D / R**5)
    return float(parity.sign * value / _FOUR_PI)


def enhancement_ratio(mu_a: DipoleLike, mu_b: DipoleLike, k0: float, geometry: PairGeometry,
                      parity: BellParity = SYMMETRIC) -> float:
    """Total shift over its free-space part; >1 means the mirror enhances it."""
    e = total_energy(mu_a, mu_b, k0, geometry, parity)
    if e.free_space == 0.0:
        raise FreeSpacePartZero("free-space part vanishes; ratio undefined")
    return e.total / e.free_space


@dataclass(frozen=True)
class FarZoneReport:
    """Oscillation diagnostics of the shift along a one-parameter scan."""

    scan: np.ndarray
    separation: np.ndarray
    free_space: np.ndarray
    boundary: np.ndarray
    total: np.ndarray
    total_crossings: np.ndarray
    free_crossings: np.ndarray
    boundary_crossings: np.ndarray
    envelope_positions: np.ndarray
    envelope_maxima: np.ndarray

    @property
    def ratio(self) -> np.ndarray:
        with np.errstate(divide="ignore", invalid="ignore"):
            return self.total / self.free_space

    @property
    def envelope_decay_ratios(self) -> np.ndarray:
        """Consecutive ratios of (max |free part| * separation); 1 for a pure 1/r decay."""
        product = self.envelope_maxima * self.envelope_positions
        return product[1:] / product[:-1]

    def envelope_follows_inverse_distance(self, tol: float = 0.1) -> bool:
        ratios = self.envelope_decay_ratios
        return bool(len(ratios)) and bool(np.all(np.abs(ratios - 1.0) <= tol))


def sign_changes(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Linear-interpolated zero crossings of y(x)."""
    x, y = np.asarray(x, float), np.asarray(y, float)
    idx = np.nonzero(np.signbit(y[:-1]) != np.signbit(y[1:]))[0]
    idx = idx[(y[idx] != 0) | (y[idx + 1] != 0)]
    return x[idx] - y[idx] * (x[idx + 1] - x[idx]) / (y[idx + 1] - y[idx])


def far_zone_probe(mu_a: DipoleLike, mu_b: DipoleLike, k0: float,
                   geometry_family: Callable[[float], PairGeometry], scan: Sequence[float],
                   parity: BellParity = SYMMETRIC, far_threshold: float = FAR_THRESHOLD,
                   period: float | None = None) -> FarZoneReport:
    """Scan ``geometry_family(s)`` over ``scan`` and report sign changes and envelopes.

    Scan points whose interatomic distance is not in the far zone
    (k0 * r <= far_threshold) are dropped.  Envelope maxima of |free part|
    are taken per window of length ``period`` in the scan variable (default
    2*pi/k0, one oscillation of the free-space term in r).
    """
    scan = np.asarray(scan, dtype=float)
    geoms = [geometry_family(s) for s in scan]
    keep = np.array([k0 * g.distance > far_threshold for g in geoms], dtype=bool)
    if keep.sum() < 2:
        raise EmptyScanRange(
            f"fewer than two scan points with k0*r > {far_threshold}")
    scan = scan[keep]
    geoms = [g for g, k in zip(geoms, keep) if k]
    energies = [total_energy(mu_a, mu_b, k0, g, parity) for g in geoms]
    free = np.array([e.free_space for e in energies])
    boundary = np.array([e.boundary for e in energies])
    total = free + boundary
    sep = np.array([g.distance for g in geoms])

    period = 2 * math.pi / k0 if period is None else period
    windows = np.floor((scan - scan[0]) / period).astype(int)
    env_pos, env_max = [], []
    for w in np.unique(windows):
        sel = windows == w
        # only complete windows carry a true per-period maximum
        if scan[sel][-1] - scan[sel][0] < 0.9 * period:
            continue
        i = np.argmax(np.abs(free[sel]))
        env_pos.append(sep[sel][i])
        env_max.append(np.abs(free[sel])[i])

    return FarZoneReport(
        scan=scan, separation=sep, free_space=free, boundary=boundary, total=total,
        total_crossings=sign_changes(scan, total), free_crossings=sign_changes(scan, free),
        boundary_crossings=sign_changes(scan, boundary),
        envelope_positions=np.array(env_pos), envelope_maxima=np.array(env_max))

"""Shared domain types: dipoles, pair geometry, Bell parity and energy records.

Natural units are used throughout (hbar = c = 1): energies and frequencies in
eV, lengths and dipole moments in eV^-1.  The perfectly reflecting mirror sits
at z = 0 with outward normal (0, 0, 1); atoms live in z > 0.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np
from scipy import constants

#: One inverse electronvolt expressed in metres (hbar*c / eV), about 1.97e-7 m.
EV_INV_IN_METERS = constants.hbar * constants.c / constants.e

#: Mirror normal.
NORMAL = np.array([0.0, 0.0, 1.0])

#: Misalignment tolerance used by :func:`classify_configuration`.
ALIGNMENT_TOL = 1e-12


class ResonanceError(Exception):
    """Base class for every error raised by this package."""


class GeometryError(ResonanceError, ValueError):
    pass


class AtomOnOrBehindMirror(GeometryError):
    pass


class CoincidentAtoms(GeometryError):
    pass


class ZeroSeparation(GeometryError):
    pass


class NumericalFailure(ResonanceError, ArithmeticError):
    """Base class for failures of a numerical evaluator."""


def metres_to_natural(length_m: float) -> float:
    return length_m / EV_INV_IN_METERS


def natural_to_metres(length: float) -> float:
    return length * EV_INV_IN_METERS


@dataclass(frozen=True)
class DipoleVector:
    """Real transition-dipole moment (eV^-1)."""

    mx: float = 0.0
    my: float = 0.0
    mz: float = 0.0

    def __post_init__(self):
        for name in ("mx", "my", "mz"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ValueError(f"dipole component {name} must be finite, got {value}")
            object.__setattr__(self, name, value)

    @classmethod
    def along(cls, axis: str, magnitude: float = 1.0) -> "DipoleVector":
        comps = {"x": 0.0, "y": 0.0, "z": 0.0}
        if axis not in comps:
            raise ValueError(f"unknown axis {axis!r}")
        comps[axis] = magnitude
        return cls(comps["x"], comps["y"], comps["z"])

    def as_array(self) -> np.ndarray:
        return np.array([self.mx, self.my, self.mz])

    def __iter__(self):
        return iter((self.mx, self.my, self.mz))

    def __mul__(self, factor: float) -> "DipoleVector":
        return DipoleVector(self.mx * factor, self.my * factor, self.mz * factor)

    __rmul__ = __mul__


DipoleLike = Union[DipoleVector, Sequence[float], np.ndarray]


def as_vector(value: DipoleLike) -> np.ndarray:
    """Coerce a dipole or position-like value to a finite float 3-vector."""
    if isinstance(value, DipoleVector):
        return value.as_array()
    arr = np.asarray(value, dtype=float)
    if arr.shape != (3,):
        raise ValueError(f"expected a 3-vector, got shape {arr.shape}")
    if not np.isfinite(arr).all():
        raise ValueError(f"vector components must be finite, got {arr}")
    return arr


def check_frequency(omega0: float, allow_static: bool = True) -> float:
    """Validate a transition frequency.  ``omega0 = 0`` is the static limit."""
    omega0 = float(omega0)
    if not math.isfinite(omega0) or omega0 < 0 or (omega0 == 0 and not allow_static):
        raise ValueError(f"transition frequency must be positive, got {omega0}")
    return omega0


class BellParity(enum.Enum):
    """Selects the symmetric (+) or antisymmetric (-) one-excitation Bell state."""

    SYMMETRIC = "symmetric"
    ANTISYMMETRIC = "antisymmetric"

    @property
    def sign(self) -> int:
        return 1 if self is BellParity.SYMMETRIC else -1

    def flipped(self) -> "BellParity":
        return BellParity.ANTISYMMETRIC if self is BellParity.SYMMETRIC else BellParity.SYMMETRIC

    @classmethod
    def parse(cls, value: Union[str, int, "BellParity"]) -> "BellParity":
        if isinstance(value, cls):
            return value
        if isinstance(value, int):
            if value == 1:
                return cls.SYMMETRIC
            if value == -1:
                return cls.ANTISYMMETRIC
            raise ValueError(f"parity sign must be +1 or -1, got {value}")
        key = str(value).strip().lower()
        aliases = {"+": cls.SYMMETRIC, "plus": cls.SYMMETRIC, "sym": cls.SYMMETRIC,
                   "-": cls.ANTISYMMETRIC, "minus": cls.ANTISYMMETRIC, "anti": cls.ANTISYMMETRIC}
        if key in aliases:
            return aliases[key]
        return cls(key)


SYMMETRIC = BellParity.SYMMETRIC
ANTISYMMETRIC = BellParity.ANTISYMMETRIC


@dataclass(frozen=True)
class PairGeometry:
    """Positions of atoms A and B (eV^-1) in the half-space above the mirror."""

    pos_a: tuple
    pos_b: tuple

    def __post_init__(self):
        object.__setattr__(self, "pos_a", tuple(float(c) for c in as_vector(self.pos_a)))
        object.__setattr__(self, "pos_b", tuple(float(c) for c in as_vector(self.pos_b)))

    @classmethod
    def perpendicular(cls, L: float, z: float) -> "PairGeometry":
        """A at height z, B directly above it at z + L."""
        return cls((0.0, 0.0, z), (0.0, 0.0, z + L))

    @classmethod
    def parallel(cls, D: float, z: float) -> "PairGeometry":
        """Both atoms at height z, B displaced by D along +y."""
        return cls((0.0, 0.0, z), (0.0, D, z))

    @property
    def a(self) -> np.ndarray:
        return np.array(self.pos_a)

    @property
    def b(self) -> np.ndarray:
        return np.array(self.pos_b)

    @property
    def separation(self) -> np.ndarray:
        """Vector from A to B."""
        return self.b - self.a

    @property
    def distance(self) -> float:
        return float(np.linalg.norm(self.separation))

    @property
    def image_distance(self) -> float:
        """Distance from A to the mirror image of B."""
        image_b = self.b * np.array([1.0, 1.0, -1.0])
        return float(np.linalg.norm(image_b - self.a))

    def swapped(self) -> "PairGeometry":
        return PairGeometry(self.pos_b, self.pos_a)

    def translated(self, shift) -> "PairGeometry":
        shift = as_vector(shift)
        return PairGeometry(self.a + shift, self.b + shift)


def validate_geometry(geometry: PairGeometry) -> PairGeometry:
    """Return ``geometry`` unchanged if both atoms sit strictly above the mirror
    and do not coincide."""
    for label, pos in (("A", geometry.pos_a), ("B", geometry.pos_b)):
        if not pos[2] > 0:
            raise AtomOnOrBehindMirror(f"atom {label} at z={pos[2]} is not in the half-space z>0")
    if geometry.pos_a == geometry.pos_b or geometry.distance == 0.0:
        raise CoincidentAtoms(f"atoms coincide at {geometry.pos_a}")
    return geometry


@dataclass(frozen=True)
class Perpendicular:
    """Pair stacked along the mirror normal: separation L, lower atom at height z."""

    L: float
    z: float


@dataclass(frozen=True)
class Parallel:
    """Pair at common height z, in-plane separation D."""

    D: float
    z: float


@dataclass(frozen=True)
class General:
    pass


Configuration = Union[Perpendicular, Parallel, General]


def classify_configuration(geometry: PairGeometry, tol: float = ALIGNMENT_TOL) -> Configuration:
    validate_geometry(geometry)
    s = geometry.separation
    r = float(np.linalg.norm(s))
    in_plane = math.hypot(s[0], s[1])
    z_a, z_b = geometry.pos_a[2], geometry.pos_b[2]
    if in_plane <= tol * r:
        return Perpendicular(L=r, z=min(z_a, z_b))
    if abs(s[2]) <= tol * r:
        return Parallel(D=r, z=0.5 * (z_a + z_b))
    return General()


def in_plane_rotation(separation) -> np.ndarray:
    """Rotation about the mirror normal taking the in-plane part of
    ``separation`` onto +y (identity if it already points along +y)."""
    sx, sy = float(separation[0]), float(separation[1])
    rho = math.hypot(sx, sy)
    if rho == 0.0 or sx == 0.0 and sy > 0:
        return np.eye(3)
    # built from the components directly so axis-aligned cases are exact
    c, s = sy / rho, sx / rho
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


@dataclass(frozen=True)
class EnergyBreakdown:
    """Resonance shift split into its free-space and mirror-induced parts (eV)."""

    free_space: float
    boundary: float

    @property
    def total(self) -> float:
        return self.free_space + self.boundary

    def negated(self) -> "EnergyBreakdown":
        return EnergyBreakdown(-self.free_space, -self.boundary)

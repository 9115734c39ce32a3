"""Mirror-induced part of the resonance shift.

Two independent routes are provided: the explicit closed forms for the
perpendicular and parallel pair configurations, and the image construction
(atom A interacting through free space with the mirror image of atom B).
The image route also covers arbitrary pair orientations.
"""
from __future__ import annotations

import math

import numpy as np

from .core import (
    SYMMETRIC,
    AtomOnOrBehindMirror,
    BellParity,
    DipoleLike,
    EnergyBreakdown,
    PairGeometry,
    Parallel,
    Perpendicular,
    ZeroSeparation,
    as_vector,
    check_frequency,
    classify_configuration,
    in_plane_rotation,
    validate_geometry,
)
from .freespace import free_space_energy

_FOUR_PI = 4.0 * math.pi
_REFLECT_POS = np.array([1.0, 1.0, -1.0])
_REFLECT_DIPOLE = np.array([-1.0, -1.0, 1.0])


def image_of(pos, mu: DipoleLike) -> tuple[np.ndarray, np.ndarray]:
    """Image point and image dipole of a source above a perfect conductor at z=0.

    The tangential dipole components flip sign, the normal one is kept.
    """
    pos = as_vector(pos)
    if not pos[2] > 0:
        raise AtomOnOrBehindMirror(f"source at z={pos[2]} is not above the mirror")
    return reflect(pos, mu)


def reflect(pos, mu: DipoleLike) -> tuple[np.ndarray, np.ndarray]:
    """The bare reflection map (an involution); no half-space check."""
    return as_vector(pos) * _REFLECT_POS, as_vector(mu) * _REFLECT_DIPOLE


def boundary_term_via_image(mu_a: DipoleLike, mu_b: DipoleLike, k0: float,
                            geometry: PairGeometry, parity: BellParity = SYMMETRIC) -> float:
    """Boundary shift as the free-space coupling of A with the image of B."""
    validate_geometry(geometry)
    image_pos, image_mu = image_of(geometry.pos_b, mu_b)
    return free_space_energy(mu_a, image_mu, k0, image_pos - geometry.a, parity)


def _check_distances(sep, z):
    if not sep > 0:
        raise ZeroSeparation(f"interatomic distance must be positive, got {sep}")
    if not z > 0:
        raise AtomOnOrBehindMirror(f"atom-mirror distance must be positive, got {z}")


def boundary_term_perpendicular(mu_a: DipoleLike, mu_b: DipoleLike, k0: float, L: float,
                                z: float, parity: BellParity = SYMMETRIC) -> float:
    """Boundary shift for atoms stacked along the normal (lower atom at height z).

    Depends on geometry only through the image distance L + 2z.
    """
    _check_distances(L, z)
    k0 = check_frequency(k0)
    a, b = as_vector(mu_a), as_vector(mu_b)
    R = L + 2.0 * z
    x = k0 * R
    c, s = math.cos(x), math.sin(x)
    transverse = a[0] * b[0] + a[1] * b[1]
    value = (transverse * (-c - x * s + x * x * c)
             - 2.0 * a[2] * b[2] * (x * s + c)) / R**3
    return float(parity.sign * value / _FOUR_PI)


def boundary_term_parallel(mu_a: DipoleLike, mu_b: DipoleLike, k0: float, D: float,
                           z: float, parity: BellParity = SYMMETRIC) -> float:
    """Boundary shift for atoms at common height z, B displaced by D along +y.

    Includes the off-diagonal y-z coupling that has no free-space counterpart.
    """
    _check_distances(D, z)
    k0 = check_frequency(k0)
    a, b = as_vector(mu_a), as_vector(mu_b)
    R = math.sqrt(D * D + 4.0 * z * z)
    x = k0 * R
    c, s = math.cos(x), math.sin(x)
    xx = a[0] * b[0] / R**3 * (-c - x * s + x * x * c)
    zz = a[2] * b[2] / R**5 * ((D * D - 8 * z * z) * c + (D * D - 8 * z * z) * x * s
                               - D * D * x * x * c)
    yy = a[1] * b[1] / R**5 * (2 * (D * D - 2 * z * z) * c + 2 * (D * D - 2 * z * z) * x * s
                               + 4 * z * z * x * x * c)
    cross = (a[1] * b[2] - a[2] * b[1]) / R**5 * (6 * z * D * x * s
                                                  + (6 * z * D - 2 * z * D * x * x) * c)
    return float(parity.sign * (xx + zz + yy + cross) / _FOUR_PI)


def boundary_term(mu_a: DipoleLike, mu_b: DipoleLike, k0: float, geometry: PairGeometry,
                  parity: BellParity = SYMMETRIC) -> float:
    """Boundary shift using the closed form when the configuration admits one."""
    config = classify_configuration(geometry)
    if isinstance(config, Perpendicular):
        return boundary_term_perpendicular(mu_a, mu_b, k0, config.L, config.z, parity)
    if isinstance(config, Parallel):
        rot = in_plane_rotation(geometry.separation)
        return boundary_term_parallel(rot @ as_vector(mu_a), rot @ as_vector(mu_b), k0,
                                      config.D, config.z, parity)
    return boundary_term_via_image(mu_a, mu_b, k0, geometry, parity)


def total_energy(mu_a: DipoleLike, mu_b: DipoleLike, k0: float, geometry: PairGeometry,
                 parity: BellParity = SYMMETRIC) -> EnergyBreakdown:
    validate_geometry(geometry)
    free = free_space_energy(mu_a, mu_b, k0, geometry.separation, parity)
    return EnergyBreakdown(free, boundary_term(mu_a, mu_b, k0, geometry, parity))


def total_energy_via_image(mu_a: DipoleLike, mu_b: DipoleLike, k0: float,
                           geometry: PairGeometry,
                           parity: BellParity = SYMMETRIC) -> EnergyBreakdown:
    """Same as :func:`total_energy` but with the boundary part always from images."""
    validate_geometry(geometry)
    free = free_space_energy(mu_a, mu_b, k0, geometry.separation, parity)
    return EnergyBreakdown(free, boundary_term_via_image(mu_a, mu_b, k0, geometry, parity))

"""Free-space resonance interaction between two correlated two-level atoms.

The general dyadic kernel is the single source of truth; the axis-aligned
closed forms below reproduce the textbook expressions term by term and are
used to cross-check it.
"""
from __future__ import annotations

import math

import numpy as np

from .core import (
    SYMMETRIC,
    BellParity,
    DipoleLike,
    ZeroSeparation,
    as_vector,
    check_frequency,
)

_EYE = np.eye(3)
_FOUR_PI = 4.0 * math.pi


def _radial_factors(k0: float, r: float) -> tuple[float, float]:
    """Return (cos x + x sin x, x^2 cos x) with x = k0 r."""
    x = k0 * r
    c, s = math.cos(x), math.sin(x)
    return c + x * s, x * x * c


def resonance_tensor(k0: float, s) -> np.ndarray:
    """Resonance interaction tensor V_ij(s) in eV^3.

    ``mu_A . V . mu_B`` is the symmetric-state resonance shift for atom B
    displaced by ``s`` from atom A.  ``k0 = 0`` gives the static dipole-dipole
    tensor.
    """
    k0 = check_frequency(k0)
    s = as_vector(s)
    r = float(np.linalg.norm(s))
    if r == 0.0:
        raise ZeroSeparation("separation vector has zero length")
    u = s / r
    uu = np.outer(u, u)
    near, far = _radial_factors(k0, r)
    return ((_EYE - 3.0 * uu) * near - (_EYE - uu) * far) / (_FOUR_PI * r**3)


def free_space_energy(mu_a: DipoleLike, mu_b: DipoleLike, k0: float, s,
                      parity: BellParity = SYMMETRIC) -> float:
    """Resonance shift (eV) of the pair in unbounded space; ``s`` points from A to B."""
    V = resonance_tensor(k0, s)
    return parity.sign * symmetric_contraction(V, as_vector(mu_a), as_vector(mu_b))


def symmetric_contraction(V: np.ndarray, a: np.ndarray, b: np.ndarray) -> float:
    """a . V . b for symmetric V, summed so that swapping a and b is exact."""
    total = V[0, 0] * (a[0] * b[0]) + V[1, 1] * (a[1] * b[1]) + V[2, 2] * (a[2] * b[2])
    total += V[0, 1] * (a[0] * b[1] + a[1] * b[0])
    total += V[0, 2] * (a[0] * b[2] + a[2] * b[0])
    total += V[1, 2] * (a[1] * b[2] + a[2] * b[1])
    return float(total)


def _axis_closed_form(mu_a, mu_b, k0, r, axis):
    if not r > 0:
        raise ZeroSeparation(f"separation must be positive, got {r}")
    k0 = check_frequency(k0)
    a, b = as_vector(mu_a), as_vector(mu_b)
    prod = a * b
    near, far = _radial_factors(k0, r)
    transverse = sum(prod[i] for i in range(3) if i != axis)
    return (transverse * (near - far) - 2.0 * prod[axis] * near) / (_FOUR_PI * r**3)


def perpendicular_free_space(mu_a: DipoleLike, mu_b: DipoleLike, k0: float, L: float,
                             parity: BellParity = SYMMETRIC) -> float:
    """Closed form for atoms separated by L along the mirror normal."""
    return float(parity.sign * _axis_closed_form(mu_a, mu_b, k0, L, axis=2))


def parallel_free_space(mu_a: DipoleLike, mu_b: DipoleLike, k0: float, D: float,
                        parity: BellParity = SYMMETRIC) -> float:
    """Closed form for atoms separated by D along y; y is now the longitudinal axis."""
    return float(parity.sign * _axis_closed_form(mu_a, mu_b, k0, D, axis=1))

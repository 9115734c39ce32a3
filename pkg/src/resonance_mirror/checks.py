"""Randomized cross-checks between the evaluation routes.

Draws are snapped to float32 values so that z + L, 2z and the like are exact
in double precision and every route sees the same geometry.  Errors are
normwise: the discrepancy divided by the spectral norm of the coupling
tensor (unit dipoles), so near-cancelling orientations do not blow up.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import ANTISYMMETRIC, SYMMETRIC, PairGeometry
from .freespace import (
    _radial_factors,
    free_space_energy,
    parallel_free_space,
    perpendicular_free_space,
)
from .mirror import (
    boundary_term_parallel,
    boundary_term_perpendicular,
    boundary_term_via_image,
)

K_RANGE = (0.1, 10.0)
LENGTH_RANGE = (1e-3, 10.0)


@dataclass(frozen=True)
class Draw:
    k0: float
    sep: float
    z: float
    mu_a: np.ndarray
    mu_b: np.ndarray
    parity: object


def _log_uniform(rng, lo, hi, size=None):
    return np.exp(rng.uniform(math.log(lo), math.log(hi), size))


def _unit(rng):
    v = rng.normal(size=3)
    return (v / np.linalg.norm(v)).astype(np.float32).astype(float)


def random_draws(n: int, seed: int = 0) -> list[Draw]:
    """``n`` random cases over the default frequency and length ranges."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n):
        k0, sep, z = (float(np.float32(v)) for v in
                      (_log_uniform(rng, *K_RANGE), _log_uniform(rng, *LENGTH_RANGE),
                       _log_uniform(rng, *LENGTH_RANGE)))
        parity = SYMMETRIC if rng.random() < 0.5 else ANTISYMMETRIC
        out.append(Draw(k0, sep, z, _unit(rng), _unit(rng), parity))
    return out


def coupling_scale(k0: float, r: float) -> float:
    """Spectral norm of the coupling tensor at distance r.

    Its eigenvalues are -2 near and near - far (twice), over 4 pi r^3; the
    mirror reflection is orthogonal so the image tensor shares this norm.
    """
    near, far = _radial_factors(k0, r)
    return max(2 * abs(near), abs(near - far)) / (4 * math.pi * r**3)


def normwise_error(value: float, reference: float, scale: float) -> float:
    return abs(value - reference) / scale


@dataclass(frozen=True)
class OracleReport:
    draws: int
    boundary_perpendicular: float
    boundary_parallel: float
    free_perpendicular: float
    free_parallel: float

    @property
    def boundary_worst(self) -> float:
        return max(self.boundary_perpendicular, self.boundary_parallel)

    @property
    def free_worst(self) -> float:
        return max(self.free_perpendicular, self.free_parallel)

    def passed(self, boundary_tol: float = 1e-12, free_tol: float = 1e-14) -> bool:
        return self.boundary_worst <= boundary_tol and self.free_worst <= free_tol


def oracle_equivalence(n: int = 1000, seed: int = 0) -> OracleReport:
    """Worst normwise errors of the closed forms against the image route and
    the general tensor contraction."""
    worst = np.zeros(4)
    for d in random_draws(n, seed):
        for kind in ("perpendicular", "parallel"):
            if kind == "perpendicular":
                g = PairGeometry.perpendicular(d.sep, d.z)
                boundary = boundary_term_perpendicular(d.mu_a, d.mu_b, d.k0, d.sep, d.z, d.parity)
                free = perpendicular_free_space(d.mu_a, d.mu_b, d.k0, d.sep, d.parity)
                col = 0
            else:
                g = PairGeometry.parallel(d.sep, d.z)
                boundary = boundary_term_parallel(d.mu_a, d.mu_b, d.k0, d.sep, d.z, d.parity)
                free = parallel_free_space(d.mu_a, d.mu_b, d.k0, d.sep, d.parity)
                col = 1
            image = boundary_term_via_image(d.mu_a, d.mu_b, d.k0, g, d.parity)
            tensor_free = free_space_energy(d.mu_a, d.mu_b, d.k0, g.separation, d.parity)
            worst[col] = max(worst[col], normwise_error(
                boundary, image, coupling_scale(d.k0, g.image_distance)))
            worst[2 + col] = max(worst[2 + col], normwise_error(
                free, tensor_free, coupling_scale(d.k0, d.sep)))
    return OracleReport(n, *(float(w) for w in worst))

"""Spectral route to the resonance shift.

The distance-dependent shift is the time integral of the field susceptibility
between the two atomic positions against the symmetric correlation function
of the Bell state.  Here the time integral is done analytically under an Abel
damping factor exp(-eta*dtau); the remaining frequency integral is done
numerically with a matching exp(-eta*omega) damping, and eta -> 0 is reached
by polynomial (Richardson) extrapolation over a schedule of regulators.

This route is an independent oracle for the closed forms; it is slow and is
not meant for production sweeps.

Configurations use signed offsets so that the A <-> B role swap is explicit:
``Perpendicular(L, z)`` means z_A = z and z_B = z + L, ``Parallel(D, z)``
means both atoms at height z with y_B - y_A = D.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np
from scipy import integrate

from .core import (
    SYMMETRIC,
    AtomOnOrBehindMirror,
    BellParity,
    DipoleLike,
    EnergyBreakdown,
    NumericalFailure,
    PairGeometry,
    Parallel,
    Perpendicular,
    ResonanceError,
    ZeroSeparation,
    as_vector,
    check_frequency,
    classify_configuration,
    in_plane_rotation,
)

N_HAT = np.array([0.0, 0.0, 1.0])
P_HAT = np.array([0.0, 1.0, 0.0])
_EYE = np.eye(3)
_NN = np.outer(N_HAT, N_HAT)
_PP = np.outer(P_HAT, P_HAT)
# p_i n_j - p_j n_i
_PN = np.outer(P_HAT, N_HAT) - np.outer(N_HAT, P_HAT)

DEFAULT_ETA_FRACTIONS = (0.2, 0.1, 0.05, 0.025, 0.0125, 0.00625)
# frequency damping is below 1e-20 past this many e-folds
_TAIL_EFOLDS = 46.0


class NonPositiveRegulator(ResonanceError, ValueError):
    pass


class UnsupportedConfiguration(ResonanceError, ValueError):
    pass


class ConvergenceFailure(NumericalFailure):
    pass


SpectralConfiguration = Union[Perpendicular, Parallel]


def _check_config(config) -> None:
    if isinstance(config, Perpendicular):
        if config.L == 0:
            raise ZeroSeparation("L must be nonzero")
        if not (config.z > 0 and config.z + config.L > 0):
            raise AtomOnOrBehindMirror(f"atoms at z={config.z} and z={config.z + config.L}")
    elif isinstance(config, Parallel):
        if config.D == 0:
            raise ZeroSeparation("D must be nonzero")
        if not config.z > 0:
            raise AtomOnOrBehindMirror(f"atoms at z={config.z}")
    else:
        raise UnsupportedConfiguration(
            f"spectral route needs a perpendicular or parallel pair, got {config!r}")


def swap_roles(config: SpectralConfiguration) -> SpectralConfiguration:
    """The same pair with atoms A and B exchanged."""
    if isinstance(config, Perpendicular):
        return Perpendicular(L=-config.L, z=config.z + config.L)
    if isinstance(config, Parallel):
        return Parallel(D=-config.D, z=config.z)
    raise UnsupportedConfiguration(f"cannot swap {config!r}")


def image_distance(config: SpectralConfiguration) -> float:
    if isinstance(config, Perpendicular):
        return 2.0 * config.z + config.L
    return math.hypot(config.D, 2.0 * config.z)


# -- field two-point function ------------------------------------------------

def _check_eps(epsilon):
    if not epsilon > 0:
        raise NonPositiveRegulator(f"epsilon must be positive, got {epsilon}")


def correlation_perpendicular(dtau: float, L: float, z: float, epsilon: float) -> np.ndarray:
    """Vacuum two-point function <E_i(x_A) E_j(x_B)> for the stacked pair.

    ``dtau = tau_A - tau_B``; ``epsilon`` is the i*epsilon prescription,
    applied to dtau everywhere so the result is the boundary value of an
    analytic function (and the exact transform of :func:`spectral_density`
    damped by exp(-epsilon*omega)).
    """
    _check_eps(epsilon)
    _check_config(Perpendicular(L, z))
    t = complex(dtau, -epsilon)
    R = 2.0 * z + L
    n = N_HAT
    g = np.zeros((3, 3), dtype=complex)
    for i in range(3):
        free = (t * t + (1 - 2 * n[i]) * L**2) / (t * t - L**2) ** 3
        image = (t * t + (1 - 2 * n[i]) * R**2) / (t * t - R**2) ** 3
        g[i, i] = free - (1 - 2 * n[i] * n[i]) * image
    return g / math.pi**2


def correlation_parallel(dtau: float, D: float, z: float, epsilon: float) -> np.ndarray:
    """Vacuum two-point function for the pair at common height (free + mirror term)."""
    _check_eps(epsilon)
    _check_config(Parallel(D, z))
    t = complex(dtau, -epsilon)
    R2 = D * D + 4.0 * z * z
    p, n = P_HAT, N_HAT
    free_den = (t * t - D * D) ** 3
    image_den = (t * t - R2) ** 3
    g = np.zeros((3, 3), dtype=complex)
    for i in range(3):
        for j in range(3):
            d = float(i == j)
            free = d * (t * t + (1 - 2 * p[i]) * D * D) / free_den
            image_num = ((d - 2 * n[i] * n[j])
                         * (t * t + (1 - 2 * p[i]) * D * D + (1 - 2 * n[i]) * 4 * z * z)
                         - 4 * z * D * _PN[i, j])
            g[i, j] = free - image_num / image_den
    return g / math.pi**2


def default_epsilon(config: SpectralConfiguration, omega0: float) -> float:
    """Small regulator for plotting/diagnostics only."""
    sep = abs(config.L) if isinstance(config, Perpendicular) else abs(config.D)
    return 1e-6 * min(sep, 1.0 / omega0)


# -- frequency-domain susceptibility -------------------------------------------

@dataclass(frozen=True)
class _Wave:
    """sin/cos(omega*r) with tensor coefficients c0 + c1*omega + c2*omega^2."""

    r: float
    sin_coeffs: tuple
    cos_coeffs: tuple


def _waves(config: SpectralConfiguration) -> list[_Wave]:
    zero = np.zeros((3, 3))
    if isinstance(config, Perpendicular):
        L = config.L
        R = 2.0 * config.z + L
        f = (_EYE + _NN) / R**2
        h = (_EYE - _NN) / R
        free = _Wave(L, ((_EYE - 3 * _NN) / L**3, zero, -(_EYE - _NN) / L),
                     (zero, -(_EYE - 3 * _NN) / L**2, zero))
        image = _Wave(R, (-f / R, zero, h), (zero, f, zero))
        return [free, image]
    D, z = config.D, config.z
    R = math.hypot(D, 2.0 * z)
    f = ((_EYE - 3 * _PP - 2 * _NN) * D * D + 4 * z * z * (_EYE + _NN) - 6 * z * D * _PN) / R**4
    h = ((_EYE - _PP - 2 * _NN) * D * D + 4 * z * z * (_EYE - _NN) - 2 * z * D * _PN) / R**3
    free = _Wave(D, ((_EYE - 3 * _PP) / D**3, zero, -(_EYE - _PP) / D),
                 (zero, -(_EYE - 3 * _PP) / D**2, zero))
    image = _Wave(R, (-f / R, zero, h), (zero, f, zero))
    return [free, image]


def susceptibility_coefficients(omega: float, config: SpectralConfiguration) -> np.ndarray:
    """Coefficient G_ij(omega) of (exp(i w dtau) - exp(-i w dtau)) / (8 pi^2)
    in the field susceptibility between the two atoms."""
    if omega < 0:
        raise ValueError(f"omega must be non-negative, got {omega}")
    _check_config(config)
    G = np.zeros((3, 3))
    for w in _waves(config):
        s, c = math.sin(omega * w.r), math.cos(omega * w.r)
        for power, (a, b) in enumerate(zip(w.sin_coeffs, w.cos_coeffs)):
            G += omega**power * (a * s + b * c)
    return G


def spectral_density(omega: float, config: SpectralConfiguration) -> np.ndarray:
    """Positive-frequency weight rho_ij of the two-point function,
    g_ij(dtau) = int_0^inf rho_ij(w) exp(-i w (dtau - i eps)) dw."""
    return -susceptibility_coefficients(omega, config) / (4.0 * math.pi**2)


# -- atomic correlation ----------------------------------------------------------

def atomic_correlation(dtau: float, mu_a: DipoleLike, mu_b: DipoleLike, omega0: float,
                       parity: BellParity = SYMMETRIC) -> np.ndarray:
    """Symmetric statistical function of the pair in the Bell state."""
    a, b = as_vector(mu_a), as_vector(mu_b)
    return parity.sign * np.outer(a, b) * math.cos(omega0 * dtau)


# -- the regularised frequency integral -----------------------------------------

@dataclass(frozen=True)
class SpectralResult:
    """Extrapolated shift (eV) with an error estimate and the raw eta sequence."""

    value: float
    uncertainty: float
    etas: tuple
    raw: tuple
    table: tuple = field(repr=False, default=())
    quadrature_error: float = 0.0

    @property
    def relative_uncertainty(self) -> float:
        return self.uncertainty / abs(self.value) if self.value else math.inf


def _contract(coeffs, a, b):
    return tuple(float(a @ c @ b) for c in coeffs)


_PARTS = {"total": (0, 1), "free": (0,), "boundary": (1,)}


def _scalar_waves(config, a, b, part="total"):
    """Contract each wave with the dipoles: list of (r, sin poly, cos poly)."""
    waves = _waves(config)
    return [(waves[i].r, _contract(waves[i].sin_coeffs, a, b),
             _contract(waves[i].cos_coeffs, a, b)) for i in _PARTS[part]]


def _poly(coeffs, omega):
    return coeffs[0] + omega * (coeffs[1] + omega * coeffs[2])


def _resonant_kernel(omega, omega0, eta):
    """Abel-regularised time integral: 2 * int_0^inf sin(w t) cos(w0 t) exp(-eta t) dt."""
    p, m = omega + omega0, omega - omega0
    return p / (p * p + eta * eta) + m / (m * m + eta * eta)


def _quad(*args, **kwargs):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        return integrate.quad(*args, **kwargs)


def _integrate_role(waves, omega0, eta_t, eta_w, limit):
    """int_0^inf S(w) K(w) exp(-eta_w w) dw for one atom ordering.

    Returns (value, quadrature error estimate).
    """
    scale = max(max(abs(c) for c in sc + cc) for _, sc, cc in waves) or 1.0
    if not any(any(sc + cc) for _, sc, cc in waves):
        return 0.0, 0.0

    def smooth(omega):
        total = 0.0
        for r, sc, cc in waves:
            total += _poly(sc, omega) * math.sin(omega * r) + _poly(cc, omega) * math.cos(omega * r)
        return total * math.exp(-eta_w * omega)

    def paired(u):
        # symmetric points around the resonance; the odd Lorentzian cancels to O(u)
        hi, lo = omega0 + u, omega0 - u
        s_hi, s_lo = smooth(hi), smooth(lo)
        lorentz = u / (u * u + eta_t * eta_t)
        nonres = (s_hi * (hi + omega0) / ((hi + omega0) ** 2 + eta_t * eta_t)
                  + s_lo * (lo + omega0) / ((lo + omega0) ** 2 + eta_t * eta_t))
        return (s_hi - s_lo) * lorentz + nonres

    points = [eta_t] if eta_t < omega0 else None
    total, err = _quad(paired, 0.0, omega0, points=points, limit=limit,
                       epsabs=1e-15 * scale, epsrel=1e-12)
    err = abs(err)

    upper = 2.0 * omega0
    for r, sc, cc in waves:
        for coeffs, weight in ((sc, "sin"), (cc, "cos")):
            if not any(coeffs):
                continue

            def envelope(omega, coeffs=coeffs):
                return (_poly(coeffs, omega) * _resonant_kernel(omega, omega0, eta_t)
                        * math.exp(-eta_w * omega))

            v, e = _quad(envelope, upper, upper + _TAIL_EFOLDS / eta_w,
                         weight=weight, wvar=abs(r), limit=limit,
                         epsabs=1e-15 * scale, epsrel=1e-12)
            if weight == "sin" and r < 0:
                v = -v
            total += v
            err += abs(e)
    return total, err


def richardson(etas: Sequence[float], values: Sequence[float]) -> list[list[float]]:
    """Neville table extrapolating values(eta) polynomially to eta = 0.

    Row k holds the extrapolants built from etas[:k+1]; the last entry of the
    last row uses every point.
    """
    n = len(etas)
    T = [[float(v)] for v in values]
    for k in range(1, n):
        for j in range(1, k + 1):
            prev, older = T[k][j - 1], T[k - 1][j - 1]
            T[k].append(prev + (prev - older) * etas[k] / (etas[k - j] - etas[k]))
    return T


def regulator_scales(config: SpectralConfiguration, omega0: float) -> tuple[float, float]:
    """Units for the two regulators: (frequency width in eV, damping length in eV^-1).

    The time regulator must be narrow against both omega0 and the period
    1/r_max of the susceptibility in frequency; the frequency damping must be
    short against both r_min and 1/omega0.
    """
    sep = abs(config.L) if isinstance(config, Perpendicular) else abs(config.D)
    image = image_distance(config)
    r_min, r_max = min(sep, image), max(sep, image)
    return min(omega0, 1.0 / r_max), min(r_min, 1.0 / omega0)


def spectral_energy_shift(mu_a: DipoleLike, mu_b: DipoleLike, omega0: float,
                          config: SpectralConfiguration, parity: BellParity = SYMMETRIC,
                          eta_schedule: Sequence[float] | None = None,
                          rel_tol: float | None = 1e-2, limit: int = 400,
                          part: str = "total") -> SpectralResult:
    """Resonance shift (eV) evaluated from the field susceptibility.

    ``part`` restricts the susceptibility to its free-space (``"free"``) or
    mirror (``"boundary"``) piece.

    ``eta_schedule`` holds dimensionless regulator strengths, strictly
    decreasing, at least three of them (default ``DEFAULT_ETA_FRACTIONS``).
    Each entry ``f`` damps the time integral by exp(-f*nu*dtau) and the
    frequency integral by exp(-f*ell*omega), with (nu, ell) from
    :func:`regulator_scales`; the results are extrapolated to f = 0.

    The uncertainty is the gap between the last two diagonal extrapolants
    plus the accumulated quadrature error estimate.  Raises
    :class:`ConvergenceFailure` if it exceeds ``rel_tol`` relative to the
    value (pass ``rel_tol=None`` to skip the check).
    """
    omega0 = check_frequency(omega0, allow_static=False)
    _check_config(config)
    etas = [float(e) for e in (DEFAULT_ETA_FRACTIONS if eta_schedule is None else eta_schedule)]
    if len(etas) < 3:
        raise ValueError("eta_schedule needs at least three regulators")
    if any(e <= 0 for e in etas):
        raise NonPositiveRegulator(f"regulators must be positive, got {etas}")
    if any(b >= a for a, b in zip(etas, etas[1:])):
        raise ValueError(f"eta_schedule must be strictly decreasing, got {etas}")

    if part not in _PARTS:
        raise ValueError(f"part must be one of {sorted(_PARTS)}, got {part!r}")
    a, b = as_vector(mu_a), as_vector(mu_b)
    forward = _scalar_waves(config, a, b, part)
    backward = _scalar_waves(swap_roles(config), b, a, part)
    nu, ell = regulator_scales(config, omega0)

    raw, qerr = [], 0.0
    for f in etas:
        i_ab, e_ab = _integrate_role(forward, omega0, f * nu, f * ell, limit)
        i_ba, e_ba = _integrate_role(backward, omega0, f * nu, f * ell, limit)
        raw.append(parity.sign * (i_ab + i_ba) / (8.0 * math.pi**2))
        qerr = max(qerr, (e_ab + e_ba) / (8.0 * math.pi**2))

    table = richardson(etas, raw)
    value = table[-1][-1]
    uncertainty = abs(value - table[-2][-1]) + qerr
    result = SpectralResult(value=value, uncertainty=uncertainty, etas=tuple(etas),
                            raw=tuple(raw), table=tuple(tuple(r) for r in table),
                            quadrature_error=qerr)
    if rel_tol is not None and uncertainty > rel_tol * abs(value):
        raise ConvergenceFailure(
            f"spectral shift {value:.6e} has uncertainty {uncertainty:.3e}, "
            f"above {rel_tol:g} relative")
    return result


def spectral_breakdown(mu_a: DipoleLike, mu_b: DipoleLike, omega0: float,
                       geometry: PairGeometry, parity: BellParity = SYMMETRIC,
                       **kwargs) -> tuple[EnergyBreakdown, float]:
    """Free-space and mirror parts of the shift from the spectral route.

    Returns the breakdown and the combined uncertainty (eV).  Only pairs that
    classify as perpendicular or parallel are supported.
    """
    config = classify_configuration(geometry)
    a, b = as_vector(mu_a), as_vector(mu_b)
    z_a, z_b = geometry.pos_a[2], geometry.pos_b[2]
    if isinstance(config, Perpendicular):
        config = Perpendicular(L=z_b - z_a, z=z_a)
    elif isinstance(config, Parallel):
        rot = in_plane_rotation(geometry.separation)
        a, b = rot @ a, rot @ b
        config = Parallel(D=config.D, z=config.z)
    else:
        raise UnsupportedConfiguration("spectral route needs a perpendicular or parallel pair")
    free = spectral_energy_shift(a, b, omega0, config, parity, part="free", **kwargs)
    bound = spectral_energy_shift(a, b, omega0, config, parity, part="boundary", **kwargs)
    return EnergyBreakdown(free.value, bound.value), free.uncertainty + bound.uncertainty

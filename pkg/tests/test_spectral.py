import math
import warnings

import numpy as np
import pytest
from scipy import integrate

from resonance_mirror.core import (
    ANTISYMMETRIC,
    AtomOnOrBehindMirror,
    General,
    PairGeometry,
    Parallel,
    Perpendicular,
    ZeroSeparation,
)
from resonance_mirror.mirror import boundary_term, total_energy
from resonance_mirror.spectral import (
    ConvergenceFailure,
    NonPositiveRegulator,
    UnsupportedConfiguration,
    atomic_correlation,
    correlation_parallel,
    correlation_perpendicular,
    image_distance,
    richardson,
    spectral_breakdown,
    spectral_density,
    spectral_energy_shift,
    swap_roles,
)

X, Y, Z = (1.0, 0.0, 0.0), (0.0, 1.0, 0.0), (0.0, 0.0, 1.0)


def _closed(a, b, omega0, config, parity=None):
    if isinstance(config, Perpendicular):
        g = PairGeometry.perpendicular(config.L, config.z)
    else:
        g = PairGeometry.parallel(config.D, config.z)
    kw = {} if parity is None else {"parity": parity}
    return total_energy(a, b, omega0, g, **kw).total


@pytest.mark.parametrize("config", [Perpendicular(0.5, 0.25), Parallel(0.5, 0.25)])
@pytest.mark.parametrize("a,b", [(X, X), (Z, Z), (Y, Z), ((0.6, 0.0, 0.8), (0.0, 0.6, 0.8))])
def test_matches_closed_form(config, a, b):
    ref = _closed(a, b, 4.17, config)
    res = spectral_energy_shift(a, b, 4.17, config)
    if ref == 0.0:
        assert res.value == 0.0
        return
    assert abs(res.value - ref) <= 1e-6 * abs(ref)
    assert res.uncertainty >= abs(res.value - ref)


def test_frozen_spectral_value():
    # closed form at the same point is 1.814787309... (free 2.2038 + mirror -0.3890)
    res = spectral_energy_shift(X, X, 4.17, Perpendicular(0.5, 0.25))
    assert res.value == pytest.approx(1.814787309550246, rel=1e-7)


def test_parts_and_parity():
    cfg = Parallel(0.7, 0.3)
    free = spectral_energy_shift(Y, Z, 2.0, cfg, part="free")
    bound = spectral_energy_shift(Y, Z, 2.0, cfg, part="boundary")
    assert free.value == 0.0
    g = PairGeometry.parallel(0.7, 0.3)
    assert bound.value == pytest.approx(boundary_term(Y, Z, 2.0, g), rel=1e-6)
    anti = spectral_energy_shift(Y, Z, 2.0, cfg, ANTISYMMETRIC, part="boundary")
    assert anti.value == -bound.value


def test_swapped_roles_same_energy():
    cfg = Perpendicular(0.375, 0.1875)  # dyadic, so z + L round-trips exactly
    a, b = (0.3, 0.1, 0.9), (0.5, -0.4, 0.2)
    e1 = spectral_energy_shift(a, b, 3.0, cfg).value
    e2 = spectral_energy_shift(b, a, 3.0, swap_roles(cfg)).value
    assert e1 == pytest.approx(e2, rel=1e-8)
    assert swap_roles(swap_roles(cfg)) == cfg
    assert image_distance(swap_roles(cfg)) == image_distance(cfg)


def test_breakdown_rotated_parallel():
    phi = 0.7
    s = np.array([math.cos(phi), math.sin(phi), 0.0]) * 0.5
    A = np.array([0.1, 0.2, 0.25])
    g = PairGeometry(A, A + s)
    a, b = (0.2, 0.5, 0.8), (0.9, 0.1, -0.3)
    spec, unc = spectral_breakdown(a, b, 4.17, g)
    ref = total_energy(a, b, 4.17, g)
    assert abs(spec.free_space - ref.free_space) <= max(unc, 1e-6 * abs(ref.free_space))
    assert abs(spec.boundary - ref.boundary) <= max(unc, 1e-6 * abs(ref.boundary))


def test_breakdown_rejects_general():
    g = PairGeometry((0, 0, 0.3), (0.2, 0.1, 0.6))
    with pytest.raises(UnsupportedConfiguration):
        spectral_breakdown(X, X, 1.0, g)
    with pytest.raises(UnsupportedConfiguration):
        spectral_energy_shift(X, X, 1.0, General())


def test_regulator_validation():
    cfg = Perpendicular(0.5, 0.25)
    with pytest.raises(NonPositiveRegulator):
        spectral_energy_shift(X, X, 4.17, cfg, eta_schedule=(0.2, 0.1, 0.0))
    with pytest.raises(ValueError):
        spectral_energy_shift(X, X, 4.17, cfg, eta_schedule=(0.1, 0.2, 0.05))
    with pytest.raises(ValueError):
        spectral_energy_shift(X, X, 4.17, cfg, eta_schedule=(0.2, 0.1))
    with pytest.raises(ValueError):
        spectral_energy_shift(X, X, 0.0, cfg)
    with pytest.raises(ZeroSeparation):
        spectral_energy_shift(X, X, 1.0, Parallel(0.0, 0.3))
    with pytest.raises(AtomOnOrBehindMirror):
        spectral_energy_shift(X, X, 1.0, Perpendicular(-0.5, 0.25))


def test_convergence_failure_on_coarse_schedule():
    # three wide regulators cannot reach a 1e-9 relative uncertainty
    with pytest.raises(ConvergenceFailure):
        spectral_energy_shift(X, X, 4.17, Perpendicular(0.5, 0.25),
                              eta_schedule=(0.8, 0.6, 0.4), rel_tol=1e-9)


def test_coarse_schedule_still_within_one_percent():
    cfg = Parallel(0.5, 0.25)
    res = spectral_energy_shift(Z, Z, 4.17, cfg, eta_schedule=(0.2, 0.1, 0.05, 0.025))
    ref = _closed(Z, Z, 4.17, cfg)
    assert abs(res.value - ref) <= 1e-2 * abs(ref)


def test_richardson_exact_for_polynomials():
    etas = [0.4, 0.2, 0.1, 0.05]
    values = [3.0 - 2.0 * e + 5.0 * e**2 - e**3 for e in etas]
    table = richardson(etas, values)
    assert table[-1][-1] == pytest.approx(3.0, rel=1e-12)
    assert len(table) == 4 and len(table[-1]) == 4


@pytest.mark.parametrize("config,corr", [
    (Perpendicular(0.5, 0.25), lambda t, e: correlation_perpendicular(t, 0.5, 0.25, e)),
    (Parallel(0.5, 0.25), lambda t, e: correlation_parallel(t, 0.5, 0.25, e)),
])
@pytest.mark.parametrize("dtau", [0.0, 0.3, 1.7])
def test_correlation_is_transform_of_spectral_density(config, corr, dtau):
    eps = 0.2
    g = corr(dtau, eps)
    num = np.zeros((3, 3), dtype=complex)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        for i in range(3):
            for j in range(3):
                def f(w, phase):
                    return spectral_density(w, config)[i, j] * math.exp(-w * eps) * phase(w * dtau)
                re = integrate.quad(f, 0, 60 / eps, args=(math.cos,), limit=500)[0]
                im = -integrate.quad(f, 0, 60 / eps, args=(math.sin,), limit=500)[0]
                num[i, j] = re + 1j * im
    np.testing.assert_allclose(num, g, rtol=0, atol=1e-6 * np.abs(g).max())


def test_correlation_structure():
    g = correlation_perpendicular(0.1, 0.5, 0.25, 1e-3)
    assert np.count_nonzero(g - np.diag(np.diag(g))) == 0
    g = correlation_parallel(0.1, 0.5, 0.25, 1e-3)
    # only the y-z pair mixes, antisymmetrically
    assert g[0, 1] == g[0, 2] == 0
    assert g[1, 2] == pytest.approx(-g[2, 1])
    with pytest.raises(NonPositiveRegulator):
        correlation_parallel(0.1, 0.5, 0.25, 0.0)


def test_atomic_correlation():
    c = atomic_correlation(0.0, X, Y, 4.17)
    np.testing.assert_array_equal(c, np.outer(X, Y))
    c = atomic_correlation(math.pi / 4.17, X, X, 4.17, ANTISYMMETRIC)
    np.testing.assert_allclose(c, np.outer(X, X), atol=1e-15)

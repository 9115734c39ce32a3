import math

import numpy as np
import pytest
from conftest import lengths, unit_vectors
from hypothesis import given, settings

from resonance_mirror.asymptotics import (
    EmptyScanRange,
    FreeSpacePartZero,
    Regime,
    classify_zone,
    enhancement_ratio,
    far_zone_probe,
    near_zone_parallel,
    near_zone_perpendicular,
    sign_changes,
)
from resonance_mirror.core import ANTISYMMETRIC, AtomOnOrBehindMirror, PairGeometry
from resonance_mirror.mirror import total_energy

X, Y, Z = (1.0, 0.0, 0.0), (0.0, 1.0, 0.0), (0.0, 0.0, 1.0)
PAIRS = [(X, X), (Y, Y), (Z, Z), (Y, Z), (Z, Y)]


def _near_case(kind, a, b, sep, z):
    if kind == "perpendicular":
        return (PairGeometry.perpendicular(sep, z), near_zone_perpendicular(a, b, sep, z),
                sep + 2 * z)
    return PairGeometry.parallel(sep, z), near_zone_parallel(a, b, sep, z), math.hypot(sep, 2 * z)


@pytest.mark.parametrize("kind", ["perpendicular", "parallel"])
@pytest.mark.parametrize("a,b", PAIRS)
def test_near_zone_limit_and_exponent(kind, a, b):
    g, near, R = _near_case(kind, a, b, 0.5, 0.25)
    total = total_energy(a, b, 1e-2 / max(g.distance, R), g).total
    if total == 0.0:
        assert near == 0.0
        return
    k0s = 1e-2 / max(g.distance, R) / 2.0 ** np.arange(5)
    errs = [abs(near - total_energy(a, b, k, g).total) / abs(near) for k in k0s]
    assert errs[0] <= 1e-3
    slope = np.polyfit(np.log(k0s), np.log(errs), 1)[0]
    assert slope == pytest.approx(2.0, abs=0.2)


@settings(max_examples=100)
@given(lengths, lengths, unit_vectors(), unit_vectors())
def test_near_zone_limit_random(sep, z, a, b):
    for kind in ("perpendicular", "parallel"):
        g, near, R = _near_case(kind, a, b, sep, z)
        k0 = 1e-3 / max(sep, R)
        total = total_energy(a, b, k0, g).total
        # normwise in the static coupling scale
        scale = 2 / (4 * math.pi * min(sep, R) ** 3)
        assert abs(near - total) <= 1e-5 * scale


def test_near_zone_sign_and_errors():
    assert near_zone_perpendicular(X, X, 0.5, 0.25, ANTISYMMETRIC) == -near_zone_perpendicular(
        X, X, 0.5, 0.25)
    with pytest.raises(AtomOnOrBehindMirror):
        near_zone_parallel(X, X, 0.5, 0.0)


def test_static_perpendicular_value():
    # 1/L^3 - 1/R^3 over 4 pi with L = 1, R = 2
    assert near_zone_perpendicular(X, X, 1.0, 0.5) == pytest.approx(
        (1 - 1 / 8) / (4 * math.pi), rel=1e-15)
    assert near_zone_perpendicular(Z, Z, 1.0, 0.5) == pytest.approx(
        -2 * (1 + 1 / 8) / (4 * math.pi), rel=1e-15)


def test_enhancement_ratio_fig2_regime():
    g = PairGeometry.perpendicular(1e-2, 2e-2)
    mu = 1.024e-3
    rz = enhancement_ratio((0, 0, mu), (0, 0, mu), 4.17, g)
    rx = enhancement_ratio((mu, 0, 0), (mu, 0, 0), 4.17, g)
    assert 1 < rz < 2
    assert 0 < rx < 1
    with pytest.raises(FreeSpacePartZero):
        enhancement_ratio(Y, Z, 4.17, PairGeometry.parallel(0.5, 0.25))


def test_free_space_recovery_far_from_mirror():
    L = 1e-2
    z = 0.5e3 * L  # image distance about 1e3 L
    g = PairGeometry.perpendicular(L, z)
    R = g.image_distance
    e = total_energy(X, X, 1e-3 / R, g)
    assert abs(e.boundary) / abs(e.free_space) <= 2 * (L / R) ** 3 * (1 + 1e-2)


def test_classify_zone():
    g = PairGeometry.perpendicular(0.5, 0.25)
    assert classify_zone(1e-3, g).regime is Regime.NEAR_ZONE
    assert classify_zone(100.0, g).regime is Regime.FAR_ZONE
    assert classify_zone(4.17, g).regime is Regime.INTERMEDIATE


def test_sign_changes():
    x = np.linspace(0, 10, 1001)
    zeros = sign_changes(x, np.sin(x))
    np.testing.assert_allclose(zeros, [math.pi, 2 * math.pi, 3 * math.pi], atol=1e-4)


def test_far_zone_probe_free_envelope():
    k0, z = 4.17, 0.25
    scan = np.linspace(3.0, 12.0, 4000)
    report = far_zone_probe(X, X, k0, lambda L: PairGeometry.perpendicular(L, z), scan)
    assert len(report.total_crossings) >= 1
    assert len(report.free_crossings) >= 10
    # envelope of the transverse free term decays as 1/r in the far zone
    assert report.envelope_follows_inverse_distance(tol=0.1)
    np.testing.assert_allclose(report.total, report.free_space + report.boundary, rtol=1e-14)


def test_far_zone_probe_drops_near_points():
    with pytest.raises(EmptyScanRange):
        far_zone_probe(X, X, 1.0, lambda L: PairGeometry.perpendicular(L, 0.5),
                       np.linspace(0.1, 1.0, 10))

import math

import numpy as np
import pytest
from conftest import frequencies, lengths, parities, unit_vectors
from hypothesis import given
from hypothesis import strategies as st

from resonance_mirror.checks import coupling_scale
from resonance_mirror.core import (
    ANTISYMMETRIC,
    SYMMETRIC,
    AtomOnOrBehindMirror,
    BellParity,
    PairGeometry,
    ZeroSeparation,
)
from resonance_mirror.freespace import free_space_energy
from resonance_mirror.mirror import (
    boundary_term,
    boundary_term_parallel,
    boundary_term_perpendicular,
    boundary_term_via_image,
    image_of,
    reflect,
    total_energy,
    total_energy_via_image,
)

X, Y, Z = (1.0, 0.0, 0.0), (0.0, 1.0, 0.0), (0.0, 0.0, 1.0)
FOUR_PI = 4 * math.pi


def test_image_of():
    pos, mu = image_of((1.0, 2.0, 3.0), (0.1, 0.2, 0.3))
    np.testing.assert_array_equal(pos, [1.0, 2.0, -3.0])
    np.testing.assert_array_equal(mu, [-0.1, -0.2, 0.3])
    with pytest.raises(AtomOnOrBehindMirror):
        image_of((0.0, 0.0, 0.0), X)


@given(st.tuples(*[st.floats(-1e3, 1e3)] * 3), unit_vectors())
def test_reflection_is_involution(pos, mu):
    p2, m2 = reflect(*reflect(pos, mu))
    np.testing.assert_array_equal(p2, pos)
    np.testing.assert_array_equal(m2, mu)


def test_static_perpendicular_boundary():
    # k0 -> 0: the image of a normal dipole adds, a tangential one subtracts
    L, z = 0.4, 0.3
    R = L + 2 * z
    assert boundary_term_perpendicular(X, X, 0.0, L, z) == pytest.approx(-1 / (FOUR_PI * R**3),
                                                                           rel=1e-15)
    assert boundary_term_perpendicular(Z, Z, 0.0, L, z) == pytest.approx(-2 / (FOUR_PI * R**3),
                                                                           rel=1e-15)


def test_frozen_boundary_values():
    assert boundary_term_perpendicular(X, X, 4.17, 0.5, 0.25) == pytest.approx(
        -0.3889880329971188, rel=1e-13)
    assert boundary_term_perpendicular(Z, Z, 4.17, 0.5, 0.25) == pytest.approx(
        0.6505771394919715, rel=1e-13)
    assert boundary_term_parallel(X, X, 4.17, 0.5, 0.25) == pytest.approx(
        -1.82698685875626, rel=1e-13)
    assert boundary_term_parallel(Z, Z, 4.17, 0.5, 0.25) == pytest.approx(
        1.0071273539918022, rel=1e-13)
    assert boundary_term_parallel(Y, Z, 4.17, 0.5, 0.25) == pytest.approx(
        0.8198595047644575, rel=1e-13)


def test_bad_distances():
    with pytest.raises(AtomOnOrBehindMirror):
        boundary_term_perpendicular(X, X, 1.0, 0.5, 0.0)
    with pytest.raises(ZeroSeparation):
        boundary_term_parallel(X, X, 1.0, 0.0, 0.5)


@given(frequencies, lengths, lengths, unit_vectors(), unit_vectors(), parities)
def test_perpendicular_matches_image(k0, L, z, a, b, parity):
    parity = BellParity.parse(parity)
    g = PairGeometry.perpendicular(L, z)
    diff = boundary_term_perpendicular(a, b, k0, L, z, parity) - boundary_term_via_image(
        a, b, k0, g, parity)
    assert abs(diff) <= 1e-12 * coupling_scale(k0, g.image_distance)


@given(frequencies, lengths, lengths, unit_vectors(), unit_vectors(), parities)
def test_parallel_matches_image(k0, D, z, a, b, parity):
    parity = BellParity.parse(parity)
    g = PairGeometry.parallel(D, z)
    diff = boundary_term_parallel(a, b, k0, D, z, parity) - boundary_term_via_image(
        a, b, k0, g, parity)
    assert abs(diff) <= 1e-12 * coupling_scale(k0, g.image_distance)


@given(frequencies, lengths, lengths, unit_vectors(), unit_vectors(),
       st.floats(-math.pi, math.pi), st.floats(-5, 5), st.floats(-5, 5))
def test_parallel_any_direction(k0, D, z, a, b, phi, dx, dy):
    # same pair rotated about the normal and translated in the plane
    c, s = math.cos(phi), math.sin(phi)
    R = np.array([[c, -s, 0], [s, c, 0], [0, 0, 1.0]])
    A = np.array([dx, dy, z])
    g = PairGeometry(A, A + R @ np.array([0.0, D, 0.0]))
    ref = boundary_term_parallel(a, b, k0, D, z)
    got = boundary_term(R @ a, R @ b, k0, g)
    assert abs(got - ref) <= 1e-11 * coupling_scale(k0, math.hypot(D, 2 * z))


@given(frequencies, lengths, lengths, unit_vectors(), unit_vectors())
def test_exchange_symmetry(k0, L, z, a, b):
    # swapping which atom carries which dipole leaves the shift unchanged
    for g in (PairGeometry.perpendicular(L, z), PairGeometry.parallel(L, z)):
        e1 = total_energy(a, b, k0, g)
        e2 = total_energy(b, a, k0, g.swapped())
        scale = coupling_scale(k0, g.distance) + coupling_scale(k0, g.image_distance)
        assert abs(e1.total - e2.total) <= 1e-14 * scale


@given(frequencies, lengths, lengths, unit_vectors(), unit_vectors())
def test_parity_flips_every_part(k0, L, z, a, b):
    g = PairGeometry.parallel(L, z)
    assert total_energy(a, b, k0, g, SYMMETRIC) == total_energy(a, b, k0, g, ANTISYMMETRIC).negated()


def test_general_geometry_uses_images():
    g = PairGeometry((0.0, 0.0, 0.3), (0.2, -0.1, 0.7))
    a, b = (0.3, 0.4, 0.5), (-0.2, 0.1, 0.9)
    e = total_energy(a, b, 2.0, g)
    image_pos = np.array([0.2, -0.1, -0.7])
    image_mu = np.array([0.2, -0.1, 0.9])
    expected = free_space_energy(a, image_mu, 2.0, image_pos - g.a)
    assert e.boundary == pytest.approx(expected, rel=1e-14)
    assert e.free_space == pytest.approx(free_space_energy(a, b, 2.0, g.separation), rel=1e-14)
    e_img = total_energy_via_image(a, b, 2.0, g)
    assert e_img == e


def test_image_limit_doubling_and_cancellation():
    L, k0 = 0.5, 4.17
    z = 1e-6 * L
    g = PairGeometry.perpendicular(L, z)
    ez = total_energy(Z, Z, k0, g)
    ex = total_energy(X, X, k0, g)
    assert ez.total == pytest.approx(2 * ez.free_space, rel=1e-4)
    assert abs(ex.total) <= 1e-4 * abs(ex.free_space)

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from rcircles.lie import is_height_one_parabolic, is_prevalent, polar
from rcircles.models import circle_geodesic_gap
from rcircles.scalars import DomainError, PreconditionError
from rcircles.sphere import (
    INFINITY,
    SphereModel,
    circle_through_sphere,
    geodesic_sphere,
    lorentz_gram,
    mobius_act,
    null_lift,
    stereo,
    stereo_inv,
    translation_generator,
)

seeds = st.integers(0, 2**32 - 1)


def unit(rng, m):
    v = rng.standard_normal(m)
    return v / np.linalg.norm(v)


def circumcircle(a, b, c):
    """Center and radius of the Euclidean circle through three points."""
    u, v = b - a, c - a
    M = np.array([u, v])
    G = M @ M.T
    rhs = 0.5 * np.array([u @ u, v @ v])
    lam = np.linalg.solve(G, rhs)
    center = a + lam @ M
    return center, np.linalg.norm(center - a)


@given(seeds)
def test_stereo_roundtrip(seed):
    rng = np.random.default_rng(seed)
    q, p = unit(rng, 4), unit(rng, 4)
    x = stereo(q, p)
    assert abs(x @ q) < 1e-9
    assert np.allclose(stereo_inv(q, x), p, atol=1e-9)
    assert stereo(q, q) is INFINITY and np.allclose(stereo_inv(q, INFINITY), q)


def test_orthonormal_triple_is_great_circle():
    e = np.eye(3)
    c = circle_through_sphere(e[0], e[1], -e[0])
    for s in np.linspace(-0.45, 0.45, 19):
        expected = math.cos(2 * math.pi * s) * e[0] + math.sin(2 * math.pi * s) * e[1]
        assert np.allclose(c(math.tan(math.pi * s)), expected, atol=1e-12)
    assert np.allclose(c(math.inf), -e[0])


@given(seeds)
def test_circle_lies_on_circumcircle(seed):
    rng = np.random.default_rng(seed)
    p, p1, q = (unit(rng, 3) for _ in range(3))
    center, radius = circumcircle(p, p1, q)
    c = circle_through_sphere(p, p1, q)
    assert np.allclose(c(0), p) and np.allclose(c(1), p1, atol=1e-9)
    for t in (-7.0, -0.4, 0.3, 2.5, 40.0):
        x = c(t)
        assert abs(np.linalg.norm(x) - 1) < 1e-9
        assert abs(np.linalg.norm(x - center) - radius) < 1e-7


@given(seeds)
def test_circle_matches_geodesic(seed):
    rng = np.random.default_rng(seed)
    m = SphereModel(3)
    p, p1, q = m.random_triple(rng)
    gap = circle_geodesic_gap(m.circle_through(p, p1, q), m.geodesic_through(p, p1, q), m.distance)
    assert gap < 1e-8


def test_geodesic_is_great_circle_for_antipodal_orthogonal_triple():
    e = np.eye(4)
    g = geodesic_sphere(e[0], e[1], -e[0])
    for s in np.linspace(0, 1, 9):
        assert np.allclose(g(s), math.cos(2 * math.pi * s) * e[0] + math.sin(2 * math.pi * s) * e[1], atol=1e-12)


@given(seeds)
def test_moebius_maps_circles_to_circles(seed):
    rng = np.random.default_rng(seed)
    m = SphereModel(2)
    p, p1, q = m.random_triple(rng)
    g = m.random_group(rng)
    c = m.circle_through(p, p1, q)
    c2 = m.circle_through(*(m.act(g, x) for x in (p, p1, q)))
    for t in (-3.0, 0.5, 2.0):
        assert np.linalg.norm(m.act(g, c(t)) - c2(t)) < 1e-8


def test_translation_generator_is_prevalent():
    m = SphereModel(2)
    P, Q = m.standard_pair()
    sq = m.stabilizer(Q)
    assert is_height_one_parabolic(sq) and polar(sq).dim == 2
    y = translation_generator(Q, [1.0, 0.0, 0.0])
    assert m.algebra.contains(y) and is_prevalent(y, sq)
    assert not is_prevalent(translation_generator(Q, np.zeros(3)), sq)


def test_lorentz_action_fixes_null_cone(rng):
    m = SphereModel(3)
    g = m.random_group(rng)
    G = lorentz_gram(3)
    assert np.allclose(g.T @ G @ g, G, atol=1e-10)
    p = unit(rng, 4)
    v = g @ null_lift(p)
    assert abs(v @ G @ v) < 1e-9
    assert np.allclose(mobius_act(g, p), v[1:] / v[0])


def test_errors():
    e = np.eye(3)
    with pytest.raises(PreconditionError, match="p, q"):
        circle_through_sphere(e[0], e[1], e[0])
    with pytest.raises(DomainError):
        circle_through_sphere(2 * e[0], e[1], e[2])
    with pytest.raises(DomainError):
        SphereModel(1)
    with pytest.raises(DomainError):
        mobius_act(2 * np.eye(4), e[0])

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from rcircles.lie import exp_nilpotent, is_opposite, polar
from rcircles.models import circle_geodesic_gap
from rcircles.quadric import (
    OrientedPlane,
    QuadricModel,
    act_plane,
    adapted_null_basis,
    angles_from_ab,
    bil,
    c_simple,
    characteristic_angles,
    circle_data,
    circle_standard,
    circle_through_quadric_data,
    conjugating_element,
    exp_z_closed_form_B,
    geodesic_gamma0,
    is_opposite_quadric,
    plane_distance,
    plane_from_span,
    psi,
    psi_inv,
    psi_vector,
    stabilizer_polar_quadric,
    to_B,
    z_generator,
)
from rcircles.scalars import DomainError, PreconditionError
from rcircles.suites import random_opposite_pair

seeds = st.integers(0, 2**32 - 1)
dims = st.integers(4, 7)
E4 = np.eye(4)
P12 = OrientedPlane(E4[:, [0, 1]])
P21 = OrientedPlane(E4[:, [1, 0]])


def brute_force_angles(P, Q, grid=20001):
    """(alpha, beta) from a dense grid over SO(2) and over reflections of the 2x2 frame overlap.

    For M = A^T B, max_R tr(R M) = cos a + cos b and max_F tr(F M) = cos a - cos b.
    """
    M = P.frame.T @ Q.frame

    def best(kind):
        lo, hi = -math.pi, math.pi
        for _ in range(3):
            psi_ = np.linspace(lo, hi, grid)
            c, s = np.cos(psi_), np.sin(psi_)
            if kind == "rot":
                vals = c * (M[0, 0] + M[1, 1]) + s * (M[0, 1] - M[1, 0])
            else:
                vals = c * (M[0, 0] - M[1, 1]) + s * (M[0, 1] + M[1, 0])
            k = int(np.argmax(vals))
            step = (hi - lo) / (grid - 1)
            lo, hi = psi_[k] - step, psi_[k] + step
        return vals[k]

    plus, minus = best("rot"), best("ref")
    ca, cb = (plus + minus) / 2, (plus - minus) / 2
    return math.acos(np.clip(ca, -1, 1)), math.acos(np.clip(cb, -1, 1))


def test_reversed_planes_have_angles_0_pi():
    ang = characteristic_angles(P12, P21)
    assert math.isclose(ang.alpha, 0.0, abs_tol=1e-12) and math.isclose(ang.beta, math.pi, abs_tol=1e-12)
    assert is_opposite_quadric(P12, P21)


def test_identical_planes_not_opposite():
    ang = characteristic_angles(P12, P12)
    assert ang.alpha == pytest.approx(0.0, abs=1e-12) and ang.beta == pytest.approx(0.0, abs=1e-12)
    assert not is_opposite_quadric(P12, P12)


@given(seeds, dims)
def test_angles_match_brute_force(seed, N):
    rng = np.random.default_rng(seed)
    P, Q = random_opposite_pair(rng, N, "random")
    ang = characteristic_angles(P, Q)
    ref = brute_force_angles(P, Q)
    assert abs(ang.alpha - ref[0]) < 1e-6 and abs(ang.beta - ref[1]) < 1e-6
    assert 0 <= ang.alpha <= ang.beta + 1e-12 and ang.alpha + ang.beta <= math.pi + 1e-12


@given(seeds, dims)
def test_psi_roundtrip(seed, N):
    rng = np.random.default_rng(seed)
    P = plane_from_span(*rng.standard_normal((2, N)))
    X = psi_vector(P)
    assert abs(bil(X, X)) < 1e-12
    assert plane_distance(psi_inv(7.5j * X), P) < 1e-12
    assert plane_distance(psi_inv(psi(P)), P) < 1e-12
    # swapping the frame reverses orientation: the conjugate line
    assert np.allclose(psi_vector(OrientedPlane(P.frame[:, ::-1])), 1j * X.conj())


@given(seeds, dims)
def test_three_opposite_tests_agree(seed, N):
    rng = np.random.default_rng(seed)
    m = QuadricModel(N)
    for kind in ("random", "equal", "identical", "reversed"):
        P, Q = random_opposite_pair(rng, N, kind)
        lie = is_opposite(m.stabilizer(P), m.stabilizer(Q))
        assert lie == is_opposite_quadric(P, Q) == (kind in ("random", "reversed"))


@given(seeds, dims)
def test_circle_matches_geodesic(seed, N):
    m = QuadricModel(N)
    p, p1, q = m.random_triple(np.random.default_rng(seed))
    data = circle_through_quadric_data(p, p1, q)
    assert circle_geodesic_gap(data.curve, m.geodesic_through(p, p1, q), m.distance) < 1e-8
    # the reduction generator reproduces the circle from the Lie-algebraic definition
    y = data.generator
    assert polar(m.stabilizer(q)).contains(y) and m.algebra.contains(y)
    for t in (-2.0, 0.3, 1.7):
        assert plane_distance(m.act(exp_nilpotent(t * y), p), data.curve(t)) < 1e-8


def test_simple_circle_and_standard_geodesic():
    c, c0 = circle_standard(circle_data(0.0, math.pi / 2)), c_simple(4)
    g0 = geodesic_gamma0(4)
    for t in np.linspace(-6, 6, 25):
        assert plane_distance(c(t), c0(t)) < 1e-14
    assert circle_geodesic_gap(c0, g0, plane_distance) < 1e-14


@given(st.floats(0, 1.5), st.floats(0.01, 1.5))
def test_circle_data_identities(alpha, width):
    beta = min(alpha + width, math.pi - alpha - 1e-3)
    if not alpha < beta:
        return
    d = circle_data(alpha, beta)
    if math.cos(alpha) + math.cos(beta) < 0.1:
        return
    assert abs(d.C - (d.b ** 2 - d.a ** 2)) < 1e-12
    a2, b2 = angles_from_ab(d.a, d.b)
    assert math.isclose(a2, alpha, abs_tol=1e-9) and math.isclose(b2, beta, abs_tol=1e-9)


@given(seeds, st.floats(-3, 3))
def test_exp_z_block_form(seed, t):
    rng = np.random.default_rng(seed)
    z = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    assert np.abs(to_B(exp_nilpotent(t * z_generator(z))) - exp_z_closed_form_B(z, t)).max() < 1e-12 * max(1, t * t)


@given(st.floats(0, 2), st.floats(0.05, 2), st.integers(4, 6))
def test_conjugating_element(a, width, N):
    b = a + width
    O = conjugating_element(a, b, N=N)
    assert np.abs(O.T @ O - np.eye(N)).max() < 1e-10
    alpha, beta = angles_from_ab(a, b)
    c = circle_standard(circle_data(alpha, beta, np.eye(N)[:, :4]))
    c0 = c_simple(N)
    for t in list(np.linspace(-4, 4, 19)) + [math.inf]:
        assert plane_distance(c(t), act_plane(O, c0(t))) < 1e-8


def test_adapted_null_basis_gram(rng):
    X = np.array([1, 1j, 0, 0, 0])
    Y = np.array([0, 0, 1, 1j, 0])
    basis = np.column_stack(adapted_null_basis(X, Y))
    R = np.array([[0, 1], [1, 0]])
    expected = np.block([[R, np.zeros((2, 2))], [np.zeros((2, 2)), R]])
    assert np.allclose(basis.T @ basis, expected, atol=1e-12)
    with pytest.raises(PreconditionError):
        adapted_null_basis(X, X.conj())


@pytest.mark.parametrize("N", [4, 5, 6])
def test_stabilizer_polar_matches_lie_polar(N):
    m = QuadricModel(N)
    P, _ = m.standard_pair()
    direct = stabilizer_polar_quadric(psi_vector(P), m.algebra)
    lie = polar(m.stabilizer(P))
    assert direct.dim == lie.dim == 2 * (N - 2)
    assert np.abs(lie.projection_residual(direct.rows)).max() < 1e-9


def test_errors():
    with pytest.raises(DomainError):
        QuadricModel(3)
    with pytest.raises(PreconditionError):
        circle_data(1.0, 0.5)
    with pytest.raises(DomainError):
        psi_inv(np.array([1, 0, 0, 0], dtype=complex))
    with pytest.raises(PreconditionError, match="P0, Q"):
        QuadricModel(4).circle_through(P12, P21, P12)

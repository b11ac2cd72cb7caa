import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from rcircles.scalars import (
    DomainError,
    Field,
    Tolerance,
    embed,
    is_quaternionic,
    jmap_matrix,
    oriented_svd_2x2,
    qconj,
    qmatmul,
    qmul,
    quaternionic_basis,
    random_matrix,
    rank_kernel,
    real_rank,
    unembed,
)

finite = st.floats(-5, 5, allow_nan=False, allow_infinity=False)
quats = arrays(float, (4,), elements=finite)


def qmat(shape):
    return arrays(float, shape + (4,), elements=finite)


def test_hamilton_table():
    one, i, j, k = np.eye(4)
    assert np.allclose(qmul(i, j), k)
    assert np.allclose(qmul(j, k), i)
    assert np.allclose(qmul(k, i), j)
    assert np.allclose(qmul(j, i), -k)
    for u in (i, j, k):
        assert np.allclose(qmul(u, u), -one)


def test_embed_of_units():
    one, i, j, k = np.eye(4)
    assert np.allclose(embed(j.reshape(1, 1, 4)), [[0, -1], [1, 0]])
    assert np.allclose(embed(i.reshape(1, 1, 4)), np.diag([1j, -1j]))
    assert np.allclose(embed(one.reshape(1, 1, 4)), np.eye(2))


@given(qmat((2, 3)), qmat((3, 2)))
def test_embed_is_multiplicative(A, B):
    assert np.allclose(embed(qmatmul(A, B)), embed(A) @ embed(B), atol=1e-9)


@given(qmat((3, 2)))
def test_embed_roundtrip_and_j_linearity(A):
    E = embed(A)
    assert np.allclose(unembed(E), A)
    K_left, K_right = jmap_matrix(3), jmap_matrix(2)
    assert np.allclose(E @ K_right, K_left @ E.conj())
    assert is_quaternionic(E)


@given(quats, quats)
def test_conjugation_reverses_products(p, q):
    assert np.allclose(qconj(qmul(p, q)), qmul(qconj(q), qconj(p)), atol=1e-9)


def test_unembed_rejects_non_quaternionic():
    with pytest.raises(DomainError):
        unembed(np.array([[1.0, 0], [0, 2.0]]))
    with pytest.raises(DomainError):
        embed(np.zeros((2, 2)))


def test_tolerance_validation():
    with pytest.raises(DomainError):
        Tolerance(eq_abs=0.0)
    with pytest.raises(DomainError):
        Tolerance(rank_rel=-1.0)


def test_rank_over_each_field(rng):
    A = rng.standard_normal((4, 2)) @ rng.standard_normal((2, 5))
    r, K = rank_kernel(A)
    assert r == 2 and K.shape == (5, 3)
    assert np.abs(A @ K).max() < 1e-10
    # quaternionic rank: rows of a rank-one H matrix
    u, v = rng.standard_normal((3, 1, 4)), rng.standard_normal((1, 4, 4))
    rH, KH = rank_kernel(qmatmul(u, v))
    assert rH == 1 and KH.shape == (4, 3, 4)
    assert np.abs(qmatmul(qmatmul(u, v), KH)).max() < 1e-10


def test_quaternionic_basis_is_j_closed(rng):
    Q = embed(rng.standard_normal((3, 2, 4)))
    B = quaternionic_basis(Q)
    assert B.shape == (6, 4)
    assert np.allclose(B.conj().T @ B, np.eye(4), atol=1e-12)
    assert real_rank(np.hstack([B, Q])) == 4
    assert real_rank(np.hstack([B, jmap_matrix(3) @ B.conj()])) == 4
    assert is_quaternionic(B)


@given(arrays(float, (2, 2), elements=finite))
def test_oriented_svd(M):
    U, l1, l2, V = oriented_svd_2x2(M)
    assert np.allclose(U @ np.diag([l1, l2]) @ V.T, M, atol=1e-9)
    for R in (U, V):
        assert np.allclose(R.T @ R, np.eye(2)) and math.isclose(np.linalg.det(R), 1.0)
    assert l1 >= abs(l2) - 1e-12
    s = np.linalg.svd(M, compute_uv=False)
    assert np.allclose(sorted([l1, abs(l2)]), sorted(s), atol=1e-9)
    if abs(np.linalg.det(M)) > 1e-6:
        assert np.sign(l2) == np.sign(np.linalg.det(M))


@pytest.mark.parametrize("F", list(Field))
def test_random_matrix_shapes(rng, F):
    M = random_matrix(rng, 3, 2, F)
    assert M.shape == (3 * F.block, 2 * F.block)
    if F is Field.H:
        assert is_quaternionic(M)

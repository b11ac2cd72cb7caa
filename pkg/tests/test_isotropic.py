import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from rcircles.grassmann import ConnectingIso, subspace_distance
from rcircles.isotropic import (
    EVEN_ONLY,
    FAMILIES,
    IsotropicModel,
    adapted_basis_and_S,
    circle_through_iso,
    congruence_normal_form,
    geodesic_iso,
    graph_curve,
    isotropic_subspace,
    standard_form,
    tskew_residual,
)
from rcircles.lie import is_height_one_parabolic, is_prevalent, polar
from rcircles.models import circle_geodesic_gap
from rcircles.scalars import DomainError, Field, InconsistencyError, PreconditionError, random_matrix
from rcircles.suites import non_skew_perturbation, span_isotropy

seeds = st.integers(0, 2**32 - 1)
CASES = [(fam, n) for fam in FAMILIES for n in (2, 3) if not (fam in EVEN_ONLY and n % 2)]
families = st.sampled_from(CASES)

# real dimensions of the automorphism algebras u(f) at n = 2 (trace-free part)
ALGEBRA_DIMS = {
    "c_symmetric": 12,  # so(4, C)
    "r_symplectic": 10,  # sp(4, R)
    "c_symplectic": 20,  # sp(4, C)
    "r_hermitian": 6,  # so(2, 2)
    "c_hermitian": 15,  # su(2, 2)
    "h_hermitian": 36,  # sp(2, 2)
    "h_skew_hermitian": 28,  # so*(8)
}


@pytest.mark.parametrize("family", sorted(FAMILIES))
def test_algebra_dimensions_and_parabolics(family):
    m = IsotropicModel(family, 2)
    assert m.algebra.dim == ALGEBRA_DIMS[family]
    P, Q = m.standard_pair()
    sq = m.stabilizer(Q)
    assert is_height_one_parabolic(sq)
    y = m.sample_qperp(np.random.default_rng(0))
    assert polar(sq).contains(y) and is_prevalent(y, sq)


def test_odd_n_not_self_dual():
    for fam in EVEN_ONLY:
        f = standard_form(fam, 3)
        assert not f.self_dual
        m = IsotropicModel(fam, 3)
        P, Q = m.standard_pair()
        with pytest.raises(DomainError):
            circle_through_iso(P, P, Q, f)


@given(seeds, families)
def test_circle_is_isotropic_and_matches_geodesic(seed, case):
    m = IsotropicModel(*case)
    p, p1, q = m.random_triple(np.random.default_rng(seed))
    T, c = circle_through_iso(p, p1, q, m.form)
    assert tskew_residual(T, m.form) < 1e-9
    for t in (-5.0, -0.5, 0.8, 3.0):
        assert span_isotropy(m.form, c(t).basis) < 1e-9
    g = geodesic_iso(T, m.form)
    assert circle_geodesic_gap(c, g, m.distance) < 1e-8


@given(seeds, families)
def test_adapted_J_and_S(seed, case):
    m = IsotropicModel(*case)
    f = m.form
    p, p1, q = m.random_triple(np.random.default_rng(seed))
    T, _ = circle_through_iso(p, p1, q, f)
    data = adapted_basis_and_S(T, f)
    S, J = data.S, data.J
    I = np.eye(S.shape[0])
    assert np.allclose(S @ S, -I, atol=1e-8)
    r = J.invariant_residuals()
    assert r["definite_sign"] == f.eps
    assert np.allclose(J.square(), f.eps * I, atol=1e-8)
    # S maps P onto Q and Q onto P
    assert subspace_distance(m.act(S, p), q) < 1e-8
    assert subspace_distance(m.act(S, q), p) < 1e-8


@given(seeds, families)
def test_non_skew_map_breaks_isotropy(seed, case):
    m = IsotropicModel(*case)
    rng = np.random.default_rng(seed)
    p, p1, q = m.random_triple(rng)
    T, _ = circle_through_iso(p, p1, q, m.form)
    Tb = ConnectingIso(p, q, T.matrix + 0.5 * non_skew_perturbation(rng, T, m.form))
    bad = graph_curve(Tb)
    assert tskew_residual(Tb, m.form) > 1e-6
    assert max(span_isotropy(m.form, bad(t).basis) for t in np.logspace(-2, 2, 9)) > 1e-3
    with pytest.raises(PreconditionError):
        adapted_basis_and_S(Tb, m.form)


@pytest.mark.parametrize("family", sorted(FAMILIES))
def test_congruence_normal_form(family, rng):
    f = standard_form(family, 2)
    n, F = 2, f.field
    A = random_matrix(rng, n, n, F)
    M = A - f.eps * f.star(A)  # the f-skew condition makes U^* G T U eps-sigma-antisymmetric
    W, NF = congruence_normal_form(M, f)
    assert np.allclose(f.star(W) @ M @ W, NF, atol=1e-9)
    # one nonzero entry per row and column
    mask = np.abs(NF) > 1e-9
    assert mask.sum(axis=0).max() <= 1 and mask.sum(axis=1).max() <= 1


def test_errors():
    with pytest.raises(DomainError):
        standard_form("nope", 2)
    f = standard_form("r_symplectic", 2)
    with pytest.raises(DomainError):
        isotropic_subspace(f, np.eye(4)[:, [0, 2]])
    m = IsotropicModel("r_symplectic", 2)
    P, Q = m.standard_pair()
    with pytest.raises(PreconditionError):
        circle_through_iso(P, P, Q, f)

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from rcircles.classical import (
    GROUPS,
    ClassicalGroupElement,
    ClassicalModel,
    birational_act,
    check_group_element,
    diagonal_element,
    diagonal_geodesic_classical,
    graph_embed,
    graph_gram,
    graph_matrix,
    opposite_elements,
    random_element,
)
from rcircles.grassmann import subspace_distance
from rcircles.models import circle_geodesic_gap
from rcircles.scalars import DomainError

seeds = st.integers(0, 2**32 - 1)
groups = st.sampled_from([("SO", 2), ("SO", 4), ("U", 2), ("U", 3), ("Sp", 2)])


@pytest.mark.parametrize("group,size", [("SO", 2), ("U", 2), ("Sp", 2), ("U", 1)])
def test_diagonal_geodesic_is_circle(group, size):
    """The circle through graph(1), graph(R_{pi/2}) and graph(-1) is the diagonal geodesic."""
    m = ClassicalModel(group, size)
    pts = [graph_embed(diagonal_element(group, size, a)) for a in (0.0, math.pi / 2, math.pi)]
    c = m.circle_through(*pts)
    g = diagonal_geodesic_classical(group, size)
    assert circle_geodesic_gap(c, g, m.distance) < 1e-10
    assert circle_geodesic_gap(c, m.geodesic_through(*pts), m.distance) < 1e-8


@given(seeds, groups)
def test_graphs_roundtrip(seed, case):
    group, size = case
    A = random_element(np.random.default_rng(seed), group, size)
    check_group_element(A)
    P = graph_embed(A)
    assert np.allclose(graph_matrix(P), A.matrix, atol=1e-10)
    m = ClassicalModel(group, size)
    assert m.form.isotropy_residual(P.basis) < 1e-10


@given(seeds, groups)
def test_birational_action_matches_linear_action(seed, case):
    group, size = case
    rng = np.random.default_rng(seed)
    m = ClassicalModel(group, size)
    A = random_element(rng, group, size)
    g = m.random_group(rng)
    # g preserves the split form; in graph coordinates it preserves diag(I, -I)
    G = graph_gram(size, GROUPS[group][1])
    assert np.allclose(g.conj().T @ G @ g, G, atol=1e-9)
    B = birational_act(g, A)
    assert subspace_distance(graph_embed(B), m.act(g, graph_embed(A))) < 1e-9


@given(seeds, groups)
def test_opposite_iff_difference_invertible(seed, case):
    group, size = case
    rng = np.random.default_rng(seed)
    m = ClassicalModel(group, size)
    S, T = random_element(rng, group, size), random_element(rng, group, size)
    assert opposite_elements(S, T) == m.is_opposite(graph_embed(S), graph_embed(T))
    assert not opposite_elements(S, S)
    minus = ClassicalGroupElement(group, -S.matrix)
    if group != "SO" or size % 2 == 0:
        assert opposite_elements(S, minus)


def test_errors():
    with pytest.raises(DomainError):
        ClassicalModel("SO", 3)
    with pytest.raises(DomainError):
        ClassicalModel("GL", 2)
    with pytest.raises(DomainError):
        check_group_element(ClassicalGroupElement("U", 2 * np.eye(2)))
    with pytest.raises(DomainError):
        check_group_element(ClassicalGroupElement("SO", np.diag([1.0, -1.0])))
    with pytest.raises(DomainError):
        graph_embed(ClassicalGroupElement("U", 2 * np.eye(2)))
    A = ClassicalGroupElement("U", np.eye(2, dtype=complex))
    flip = np.block([[np.zeros((2, 2)), np.eye(2)], [np.eye(2), np.zeros((2, 2))]])
    with pytest.raises(DomainError):
        birational_act(flip, A)  # does not preserve diag(I, -I)
    negate = np.block([[np.eye(2), np.zeros((2, 2))], [np.zeros((2, 2)), -np.eye(2)]])
    assert np.allclose(birational_act(negate, A).matrix, -np.eye(2))

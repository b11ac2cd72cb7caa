"""SO_2m, U_n and Sp_n as isotropic Grassmannians through their graphs.

The form on F^n x F^n is f((x, y), (x', y')) = x^H x' - y^H y', Gram diag(I, -I),
so graph(A) is isotropic exactly when A is unitary.  It is the standard split
Hermitian form [[0, I], [I, 0]] written in the frame K = [[I, I], [I, -I]] / sqrt 2,
which carries F^n x 0 to graph(I) and 0 x F^n to graph(-I).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .grassmann import SubspacePoint
from .isotropic import IsotropicModel
from .models import GeodesicCurve
from .scalars import DEFAULT_TOL, DomainError, Field, Tolerance, embed, real_rank

GROUPS = {"SO": ("r_hermitian", Field.R), "U": ("c_hermitian", Field.C), "Sp": ("h_hermitian", Field.H)}


def graph_frame(n: int, F: Field) -> np.ndarray:
    m = n * F.block
    I = np.eye(m)
    return np.block([[I, I], [I, -I]]) / math.sqrt(2)


@dataclass(frozen=True, eq=False)
class ClassicalGroupElement:
    group: str
    matrix: np.ndarray  # embedded for Sp

    @property
    def field(self) -> Field:
        return GROUPS[self.group][1]

    @property
    def size(self) -> int:
        return self.matrix.shape[0] // self.field.block


def check_group_element(A: ClassicalGroupElement, tol: Tolerance = DEFAULT_TOL) -> ClassicalGroupElement:
    if A.group not in GROUPS:
        raise DomainError(f"unknown group {A.group!r}")
    M = np.asarray(A.matrix)
    if np.abs(M.conj().T @ M - np.eye(M.shape[0])).max() > tol.eq_abs:
        raise DomainError("matrix is not unitary")
    if A.group == "SO":
        if np.iscomplexobj(M) and np.abs(M.imag).max() > tol.eq_abs:
            raise DomainError("SO elements are real")
        if M.shape[0] % 2 or np.linalg.det(M.real) < 0:
            raise DomainError("SO_2m needs even size and determinant one")
    return A


class ClassicalModel(IsotropicModel):
    def __init__(self, group: str, n: int, tol: Tolerance = DEFAULT_TOL):
        if group not in GROUPS:
            raise DomainError(f"unknown group {group!r}; choose from {sorted(GROUPS)}")
        family, F = GROUPS[group]
        if group == "SO" and n % 2:
            raise DomainError("SO_2m needs even size")
        super().__init__(family, n, tol, frame=graph_frame(n, F))
        self.group = group
        self.name = "classical"

    def graph_embed(self, A: ClassicalGroupElement) -> SubspacePoint:
        return graph_embed(A, self.tol)


def graph_gram(n: int, F: Field) -> np.ndarray:
    m = n * F.block
    return np.diag([1.0] * m + [-1.0] * m)


def graph_embed(A: ClassicalGroupElement, tol: Tolerance = DEFAULT_TOL) -> SubspacePoint:
    M = np.asarray(A.matrix)
    B = np.vstack([np.eye(M.shape[0]), M])
    G = graph_gram(A.size, A.field)
    if np.abs(B.conj().T @ G @ B).max() > tol.eq_abs:
        raise DomainError("graph is not isotropic; matrix is not in the compact group")
    return SubspacePoint(A.field, B)


def graph_matrix(P: SubspacePoint, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """A with P = graph(A); raises if P leaves the graph chart."""
    k = P.basis.shape[1]
    top, bottom = P.basis[:k], P.basis[k:]
    if real_rank(top, tol) < k:
        raise DomainError("subspace is not a graph over the first factor")
    return bottom @ np.linalg.inv(top)


def birational_act(calA, A: ClassicalGroupElement, tol: Tolerance = DEFAULT_TOL) -> ClassicalGroupElement:
    """B = (b + d A)(a + c A)^{-1} for calA = [[a, c], [b, d]] in U(f)."""
    calA = np.asarray(calA)
    m = A.matrix.shape[0]
    G = graph_gram(A.size, A.field)
    if np.abs(calA.conj().T @ G @ calA - G).max() > tol.eq_abs * max(1.0, np.abs(calA).max()) ** 2:
        raise DomainError("block matrix does not preserve the form")
    a, c = calA[:m, :m], calA[:m, m:]
    b, d = calA[m:, :m], calA[m:, m:]
    den = a + c @ A.matrix
    if real_rank(den, tol) < m:
        raise DomainError("image is the point at infinity of the graph chart")
    B = (b + d @ A.matrix) @ np.linalg.inv(den)
    if A.group == "SO":
        B = B.real
    return ClassicalGroupElement(A.group, B)


def rotation(t: float) -> np.ndarray:
    return np.array([[math.cos(t), -math.sin(t)], [math.sin(t), math.cos(t)]])


def diagonal_element(group: str, size: int, t: float) -> ClassicalGroupElement:
    """(R_t, ..., R_t) for SO_2m and (e^{it}, ..., e^{it}) otherwise."""
    if group == "SO":
        if size % 2:
            raise DomainError("SO_2m needs even size")
        return ClassicalGroupElement(group, np.kron(np.eye(size // 2), rotation(t)))
    if group == "U":
        return ClassicalGroupElement(group, np.exp(1j * t) * np.eye(size))
    if group == "Sp":
        q = np.zeros((size, size, 4))
        q[np.arange(size), np.arange(size)] = [math.cos(t), math.sin(t), 0.0, 0.0]
        return ClassicalGroupElement(group, embed(q))
    raise DomainError(f"unknown group {group!r}")


def diagonal_geodesic_classical(group: str, size: int) -> GeodesicCurve:
    """s -> graph of the diagonal element at angle 2 pi s (period 1)."""
    return GeodesicCurve("classical", lambda s: graph_embed(diagonal_element(group, size, 2 * math.pi * s)))


def opposite_elements(S: ClassicalGroupElement, T: ClassicalGroupElement, tol: Tolerance = DEFAULT_TOL) -> bool:
    """graph(S), graph(T) complementary iff S - T is invertible."""
    D = S.matrix - T.matrix
    return real_rank(D, tol) == D.shape[0]


def random_element(rng: np.random.Generator, group: str, size: int) -> ClassicalGroupElement:
    from scipy.stats import ortho_group, unitary_group
    if group == "SO":
        M = ortho_group.rvs(size, random_state=rng)
        if np.linalg.det(M) < 0:
            M[:, 0] *= -1
        return ClassicalGroupElement(group, M)
    if group == "U":
        return ClassicalGroupElement(group, unitary_group.rvs(size, random_state=rng))
    if group == "Sp":
        from .scalars import quaternionic_basis
        Z = embed(rng.standard_normal((size, size, 4)))
        Q = quaternionic_basis(Z)
        return ClassicalGroupElement(group, Q)
    raise DomainError(f"unknown group {group!r}")

"""Split standard Grassmannians Gr_n(F^{2n}) for F = R, C, H.

Subspaces are stored by a basis matrix; for H the basis is the complex
embedding, so an n-dimensional quaternionic subspace has 2n complex columns.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .lie import AlgebraBasis, special_linear
from .models import CircleCurve, GeodesicCurve, LieModel
from .scalars import (
    DEFAULT_TOL,
    DomainError,
    Field,
    InconsistencyError,
    PreconditionError,
    Tolerance,
    field_eye,
    random_matrix,
    real_rank,
)


@dataclass(frozen=True, eq=False)
class SubspacePoint:
    field: Field
    basis: np.ndarray  # m x k, embedded for H

    def __post_init__(self):
        object.__setattr__(self, "field", Field(self.field))
        B = np.asarray(self.basis)
        if self.field is Field.R and np.iscomplexobj(B):
            if np.abs(B.imag).max(initial=0.0) > 1e-12 * max(1.0, np.abs(B).max()):
                raise DomainError("real subspace with complex basis")
            B = B.real
        object.__setattr__(self, "basis", B)

    @property
    def ambient(self) -> int:
        return self.basis.shape[0] // self.field.block

    @property
    def dim(self) -> int:
        return self.basis.shape[1] // self.field.block

    def orthonormal(self) -> np.ndarray:
        q, _ = np.linalg.qr(self.basis)
        return q


def subspace_distance(A: SubspacePoint, B: SubspacePoint) -> float:
    """Largest principal angle, computed as arcsin of the projection residual."""
    if A.basis.shape != B.basis.shape:
        return math.pi / 2
    Qa, Qb = A.orthonormal(), B.orthonormal()
    R = Qb - Qa @ (Qa.conj().T @ Qb)
    return float(math.asin(min(1.0, np.linalg.norm(R, 2))))


def _check_same_space(P: SubspacePoint, Q: SubspacePoint):
    if P.field is not Q.field or P.basis.shape[0] != Q.basis.shape[0]:
        raise DomainError("subspaces live in different ambient spaces")


def is_opposite_gr(P: SubspacePoint, Q: SubspacePoint, tol: Tolerance = DEFAULT_TOL) -> bool:
    _check_same_space(P, Q)
    cols = P.basis.shape[1] + Q.basis.shape[1]
    if cols != P.basis.shape[0]:
        return False
    M = np.hstack([P.orthonormal(), Q.orthonormal()])
    return real_rank(M, tol) == cols


@dataclass(frozen=True, eq=False)
class ConnectingIso:
    """T : P -> Q with T(U x) = W (matrix x), U and W the stored bases of P and Q."""

    P: SubspacePoint
    Q: SubspacePoint
    matrix: np.ndarray

    def image_basis(self) -> np.ndarray:
        return self.Q.basis @ self.matrix

    def apply(self, x_coords) -> np.ndarray:
        return self.Q.basis @ (self.matrix @ x_coords)

    def graph_generator(self) -> np.ndarray:
        """Nilpotent y with y U = T U and y W = 0, so exp(t y) P = c(t)."""
        U, W = self.P.basis, self.Q.basis
        return np.hstack([W @ self.matrix, np.zeros_like(W)]) @ np.linalg.inv(np.hstack([U, W]))


def connecting_iso(P: SubspacePoint, P1: SubspacePoint, Q: SubspacePoint, tol: Tolerance = DEFAULT_TOL) -> ConnectingIso:
    """T : P -> Q whose graph over P is P1, from P1 = {x + T x}."""
    U, W, U1 = P.basis, Q.basis, P1.basis
    coeffs = np.linalg.solve(np.hstack([U, W]), U1)
    k = U.shape[1]
    a, b = coeffs[:k], coeffs[k:]
    if real_rank(a, tol) < k:
        raise InconsistencyError("P-component of P1 is singular")
    return ConnectingIso(P, Q, b @ np.linalg.inv(a))


def _require_opposite(pairs, test, tol):
    for (A, B), name in pairs:
        if not test(A, B, tol):
            raise PreconditionError(f"points {name} are not opposite")


def circle_through_gr(P: SubspacePoint, P1: SubspacePoint, Q: SubspacePoint, tol: Tolerance = DEFAULT_TOL):
    """c(t) = {x + t T x : x in P}, c(inf) = Q."""
    for X in (P1, Q):
        _check_same_space(P, X)
    _require_opposite((((P, P1), "P, P1"), ((P, Q), "P, Q"), ((P1, Q), "P1, Q")), is_opposite_gr, tol)
    T = connecting_iso(P, P1, Q, tol)
    U, TU = P.basis, T.image_basis()
    curve = CircleCurve("grassmann", P, P1, Q, lambda t: SubspacePoint(P.field, U + t * TU))
    return T, curve


def geodesic_gr(T: ConnectingIso) -> GeodesicCurve:
    """s -> span{cos(pi s) u_i + sin(pi s) T u_i}, period 1."""
    U, TU, F = T.P.basis, T.image_basis(), T.P.field
    return GeodesicCurve("grassmann", lambda s: SubspacePoint(F, math.cos(math.pi * s) * U + math.sin(math.pi * s) * TU))


def invariant_metric_gram(T: ConnectingIso) -> np.ndarray:
    """Hermitian Gram making {u_i, T u_i} orthonormal."""
    B = np.hstack([T.P.basis, T.image_basis()])
    Binv = np.linalg.inv(B)
    return Binv.conj().T @ Binv


def principal_angles(A: SubspacePoint, B: SubspacePoint, gram=None) -> np.ndarray:
    """Principal angles (radians, ascending) between two subspaces for a given inner product."""
    Ua, Ub = A.basis, B.basis
    if gram is not None:
        L = np.linalg.cholesky(gram)
        Ua, Ub = L.conj().T @ Ua, L.conj().T @ Ub
    Qa, _ = np.linalg.qr(Ua)
    Qb, _ = np.linalg.qr(Ub)
    s = np.linalg.svd(Qa.conj().T @ Qb, compute_uv=False)
    return np.sort(np.arccos(np.clip(s, -1.0, 1.0)))


def standard_subspaces(n: int, F: Field | str):
    F = Field(F)
    I = field_eye(2 * n, F)
    k = n * F.block
    return SubspacePoint(F, I[:, :k]), SubspacePoint(F, I[:, k:])


class GrassmannModel(LieModel):
    def __init__(self, n: int, field: Field | str, tol: Tolerance = DEFAULT_TOL):
        super().__init__(tol)
        self.n = n
        self.field = Field(field)
        self.name = "grassmann"

    @property
    def algebra(self) -> AlgebraBasis:
        return special_linear(2 * self.n, self.field, self.tol)

    def line(self, point: SubspacePoint):
        return point.basis

    def act(self, g, point: SubspacePoint):
        return SubspacePoint(self.field, np.asarray(g) @ point.basis)

    def distance(self, a, b):
        return subspace_distance(a, b)

    def is_opposite(self, a, b):
        return is_opposite_gr(a, b, self.tol)

    def standard_pair(self):
        return standard_subspaces(self.n, self.field)

    def qperp_block(self, C) -> np.ndarray:
        k = self.n * self.field.block
        y = np.zeros((2 * k, 2 * k), dtype=complex if self.field is not Field.R else float)
        y[k:, :k] = C
        return y

    def sample_qperp(self, rng, degenerate=False):
        n, F = self.n, self.field
        if degenerate:
            r = int(rng.integers(0, n))
            C = random_matrix(rng, n, r, F) @ random_matrix(rng, r, n, F)
        else:
            C = random_matrix(rng, n, n, F)
        return self.qperp_block(C)

    def random_group(self, rng, scale=0.4):
        g = super().random_group(rng, scale)
        return g.real if self.field is Field.R else g

    def circle_through(self, p, p1, q):
        return circle_through_gr(p, p1, q, self.tol)[1]

    def geodesic_through(self, p, p1, q):
        return geodesic_gr(circle_through_gr(p, p1, q, self.tol)[0])

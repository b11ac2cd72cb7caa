"""Model-independent Lie algebra machinery.

Every algebra in scope is a real subspace of complex N x N matrices cut out by
real-linear conditions.  ``AlgebraBasis`` stores a basis that is orthonormal for
the real inner product Re tr(A^H B), so coordinates are plain projections and a
subalgebra is just a matrix of coordinate rows.  The invariant form used for
polars is the trace form Re tr(XY), a nonzero multiple of the Killing form on
each simple algebra we build.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .scalars import (
    DEFAULT_TOL,
    DomainError,
    Field,
    InconsistencyError,
    PreconditionError,
    Tolerance,
    jmap_matrix,
)


def realvec(X) -> np.ndarray:
    """Real vectorization of a complex matrix, or a stack of them."""
    X = np.asarray(X, dtype=complex)
    lead = X.shape[:-2]
    flat = X.reshape(lead + (-1,))
    return np.concatenate([flat.real, flat.imag], axis=-1)


def unrealvec(v, N: int) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    half = v.shape[-1] // 2
    return (v[..., :half] + 1j * v[..., half:]).reshape(v.shape[:-1] + (N, N))


def _kernel_rows(M, tol: Tolerance) -> np.ndarray:
    """Orthonormal rows spanning the kernel of a real matrix."""
    M = np.asarray(M, dtype=float)
    n = M.shape[1]
    if M.shape[0] == 0:
        return np.eye(n)
    _, s, vh = np.linalg.svd(M, full_matrices=True)
    if s.size == 0 or s[0] == 0:
        return np.eye(n)
    rank = int(np.sum(s > tol.rank_rel * s[0]))
    return vh[rank:]


def _row_space(M, tol: Tolerance) -> np.ndarray:
    M = np.asarray(M, dtype=float)
    if M.shape[0] == 0:
        return M.reshape(0, M.shape[1])
    _, s, vh = np.linalg.svd(M, full_matrices=False)
    if s[0] == 0:
        return vh[:0]
    return vh[: int(np.sum(s > tol.rank_rel * s[0]))]


# -- algebras -----------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class AlgebraBasis:
    """A real Lie algebra of N x N complex matrices with an orthonormal real basis."""

    tag: str
    N: int
    mats: np.ndarray  # (d, N, N) complex
    _vecs: np.ndarray = field(repr=False)  # (d, 2N^2) orthonormal rows

    @property
    def dim(self) -> int:
        return self.mats.shape[0]

    def coords(self, X) -> np.ndarray:
        return self._vecs @ realvec(X)

    def element(self, c) -> np.ndarray:
        return np.tensordot(np.asarray(c, dtype=float), self.mats, axes=(-1, 0))

    def membership_residual(self, X) -> float:
        X = np.asarray(X, dtype=complex)
        return float(np.linalg.norm(X - self.element(self.coords(X))))

    def contains(self, X, tol: Tolerance = DEFAULT_TOL) -> bool:
        X = np.asarray(X, dtype=complex)
        return self.membership_residual(X) <= tol.eq_abs * max(1.0, np.linalg.norm(X))

    def ad_matrix(self, y) -> np.ndarray:
        """Matrix of ad_y in the stored basis (columns = images of basis vectors)."""
        y = np.asarray(y, dtype=complex)
        br = y @ self.mats - self.mats @ y
        return self._vecs @ realvec(br).T

    @property
    def gram(self) -> np.ndarray:
        g = self.__dict__.get("_gram")
        if g is None:
            # Re tr(b_i b_j) = Re sum_{kl} b_i[k,l] b_j[l,k]
            g = np.einsum("ikl,jlk->ij", self.mats, self.mats).real
            object.__setattr__(self, "_gram", g)
        return g

    def random_element(self, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
        return self.element(scale * rng.standard_normal(self.dim))


def algebra_from_constraints(tag: str, N: int, constraints: list[Callable], tol: Tolerance = DEFAULT_TOL) -> AlgebraBasis:
    """Real basis of {X in gl(N, C) : every constraint(X) = 0} (constraints real-linear)."""
    n2 = N * N
    eye = np.eye(2 * n2)
    elems = unrealvec(eye, N)
    rows = []
    for con in constraints:
        imgs = np.stack([realvec(con(E)) for E in elems], axis=1)
        rows.append(imgs)
    M = np.vstack(rows) if rows else np.zeros((0, 2 * n2))
    vecs = _kernel_rows(M, tol)
    return AlgebraBasis(tag=tag, N=N, mats=unrealvec(vecs, N), _vecs=vecs)


def field_constraints(F: Field) -> list[Callable]:
    F = Field(F)
    if F is Field.R:
        return [lambda X: 1j * X.imag]
    if F is Field.H:
        def quat(X):
            K = jmap_matrix(X.shape[0] // 2)
            return X @ K - K @ X.conj()
        return [quat]
    return []


def _trace_free(X):
    return np.array([[np.trace(X)]])


_ALGEBRA_CACHE: dict = {}


def special_linear(m: int, F: Field | str, tol: Tolerance = DEFAULT_TOL) -> AlgebraBasis:
    """sl(m, F) acting on F^m (embedded as 2m x 2m complex matrices for H)."""
    F = Field(F)
    key = ("sl", m, F)
    if key not in _ALGEBRA_CACHE:
        N = m * F.block
        _ALGEBRA_CACHE[key] = algebra_from_constraints(
            f"sl({m},{F.value})", N, field_constraints(F) + [_trace_free], tol)
    return _ALGEBRA_CACHE[key]


def form_algebra(tag: str, G, F: Field | str, sigma: str, tol: Tolerance = DEFAULT_TOL) -> AlgebraBasis:
    """Trace-free f-skew endomorphisms: X^* G + G X = 0 with * = T or H."""
    F = Field(F)
    G = np.asarray(G, dtype=complex)
    key = ("form", tag, G.tobytes(), F, sigma)
    if key not in _ALGEBRA_CACHE:
        if sigma == "id":
            skew = lambda X: X.T @ G + G @ X  # noqa: E731
        else:
            skew = lambda X: X.conj().T @ G + G @ X  # noqa: E731
        _ALGEBRA_CACHE[key] = algebra_from_constraints(
            tag, G.shape[0], field_constraints(F) + [skew, _trace_free], tol)
    return _ALGEBRA_CACHE[key]


def so_complex(N: int, tol: Tolerance = DEFAULT_TOL) -> AlgebraBasis:
    """so(N, C) as a real Lie algebra of dimension N(N-1)."""
    return form_algebra(f"so({N},C)", np.eye(N), Field.C, "id", tol)


def so_lorentz(n: int, tol: Tolerance = DEFAULT_TOL) -> AlgebraBasis:
    """so(1, n+1), acting on R^{1, n+1} with Gram diag(-1, I)."""
    G = np.diag([-1.0] + [1.0] * (n + 1))
    return form_algebra(f"so(1,{n + 1})", G, Field.R, "id", tol)


# -- brackets and forms -------------------------------------------------------

def bracket(X, Y) -> np.ndarray:
    X = np.asarray(X)
    Y = np.asarray(Y)
    if X.shape != Y.shape:
        raise DomainError(f"bracket of mismatched shapes {X.shape} and {Y.shape}")
    return X @ Y - Y @ X


def trace_form(X, Y) -> float:
    X = np.asarray(X)
    Y = np.asarray(Y)
    if X.shape != Y.shape:
        raise DomainError(f"trace form of mismatched shapes {X.shape} and {Y.shape}")
    return float(np.real(np.einsum("kl,lk->", X, Y)))


# -- subalgebras --------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class SubalgebraRep:
    """Real subspace of an algebra, stored as orthonormal coordinate rows."""

    algebra: AlgebraBasis
    rows: np.ndarray  # (k, d)

    @property
    def dim(self) -> int:
        return self.rows.shape[0]

    @property
    def mats(self) -> np.ndarray:
        return self.algebra.element(self.rows)

    def projection_residual(self, c) -> np.ndarray:
        c = np.asarray(c, dtype=float)
        return c - (c @ self.rows.T) @ self.rows

    def contains_coords(self, c, tol: Tolerance = DEFAULT_TOL) -> bool:
        c = np.asarray(c, dtype=float)
        return np.linalg.norm(self.projection_residual(c)) <= tol.eq_abs * max(1.0, np.linalg.norm(c))

    def contains(self, X, tol: Tolerance = DEFAULT_TOL) -> bool:
        return self.algebra.contains(X, tol) and self.contains_coords(self.algebra.coords(X), tol)


def span(g: AlgebraBasis, mats, tol: Tolerance = DEFAULT_TOL) -> SubalgebraRep:
    coords = np.array([g.coords(M) for M in mats]).reshape(-1, g.dim)
    return SubalgebraRep(g, _row_space(coords, tol))


def stabilizer(g: AlgebraBasis, U, tol: Tolerance = DEFAULT_TOL) -> SubalgebraRep:
    """{X in g : X(span U) within span U}, with U an N x k complex basis."""
    U = np.asarray(U, dtype=complex)
    Qu, _ = np.linalg.qr(U)
    proj = np.eye(g.N) - Qu @ Qu.conj().T
    imgs = proj @ g.mats @ U  # (d, N, k)
    M = np.concatenate([imgs.real.reshape(g.dim, -1), imgs.imag.reshape(g.dim, -1)], axis=1).T
    return SubalgebraRep(g, _kernel_rows(M, tol))


def polar(p: SubalgebraRep, g: AlgebraBasis | None = None, tol: Tolerance = DEFAULT_TOL) -> SubalgebraRep:
    g = p.algebra if g is None else g
    return SubalgebraRep(g, _kernel_rows(p.rows @ g.gram, tol))


def intersect(p: SubalgebraRep, q: SubalgebraRep, tol: Tolerance = DEFAULT_TOL) -> SubalgebraRep:
    M = np.vstack([p.rows, -q.rows]).T
    K = _kernel_rows(M, tol)
    coords = K[:, : p.dim] @ p.rows
    return SubalgebraRep(p.algebra, _row_space(coords, tol))


def _bracket_coords(g: AlgebraBasis, A: SubalgebraRep, B: SubalgebraRep) -> np.ndarray:
    """Coordinates of all [a_i, b_j] as rows, plus the norm of each bracket."""
    ma, mb = A.mats, B.mats
    br = np.einsum("ikl,jlm->ijkm", ma, mb) - np.einsum("jkl,ilm->ijkm", mb, ma)
    br = br.reshape(-1, g.N, g.N)
    return np.array([g.coords(X) for X in br]).reshape(-1, g.dim), np.linalg.norm(br.reshape(len(br), -1), axis=1)


def is_height_one_parabolic(p: SubalgebraRep, g: AlgebraBasis | None = None, tol: Tolerance = DEFAULT_TOL) -> bool:
    g = p.algebra if g is None else g
    if p.dim == 0:
        return False
    c, _ = _bracket_coords(g, p, p)
    if np.abs(p.projection_residual(c)).max(initial=0.0) > tol.eq_abs:
        return False
    pp = polar(p, g, tol)
    if pp.dim == 0:
        return False
    if np.abs(p.projection_residual(pp.rows)).max(initial=0.0) > tol.eq_abs:
        return False
    _, norms = _bracket_coords(g, pp, pp)
    return bool(norms.max(initial=0.0) <= tol.eq_abs)


def is_opposite(p: SubalgebraRep, q: SubalgebraRep, g: AlgebraBasis | None = None, tol: Tolerance = DEFAULT_TOL) -> bool:
    g = p.algebra if g is None else g
    pp, qp = polar(p, g, tol), polar(q, g, tol)
    stacked = np.vstack([pp.rows, qp.rows])
    if stacked.shape[0] == 0:
        return True
    s = np.linalg.svd(stacked, compute_uv=False)
    return int(np.sum(s > tol.rank_rel * s[0])) == pp.dim + qp.dim


# -- prevalence ---------------------------------------------------------------

def _ad_squared(g: AlgebraBasis, y) -> np.ndarray:
    A = g.ad_matrix(y)
    return A @ A


def is_prevalent(y, p: SubalgebraRep, g: AlgebraBasis | None = None, tol: Tolerance = DEFAULT_TOL) -> bool:
    """y lies in the polar of p and Ker (ad_y)^2 = p."""
    g = p.algebra if g is None else g
    y = np.asarray(y, dtype=complex)
    ny = np.linalg.norm(y)
    if ny == 0:
        return False
    cy = g.coords(y)
    if np.abs(p.rows @ g.gram @ cy).max(initial=0.0) > tol.eq_abs * max(1.0, ny):
        return False
    A2 = _ad_squared(g, y)
    s = np.linalg.svd(A2, compute_uv=False)
    if s[0] == 0:
        return False
    kdim = g.dim - int(np.sum(s > tol.rank_rel * s[0]))
    if kdim != p.dim:
        return False
    return bool(np.abs(A2 @ p.rows.T).max(initial=0.0) <= tol.eq_abs * max(1.0, s[0]))


def prevalent_iso_check(y, p: SubalgebraRep, q: SubalgebraRep, g: AlgebraBasis | None = None, tol: Tolerance = DEFAULT_TOL) -> bool:
    """(ad_y)^2 restricted to the polar of p is an isomorphism onto the polar of q."""
    g = p.algebra if g is None else g
    y = np.asarray(y, dtype=complex)
    pp, qp = polar(p, g, tol), polar(q, g, tol)
    cy = g.coords(y)
    if not (g.contains(y, tol) and np.linalg.norm(qp.projection_residual(cy)) <= tol.eq_abs * max(1.0, np.linalg.norm(y))):
        raise PreconditionError("y is not in the polar of q")
    if pp.dim != qp.dim:
        return False
    if not np.any(cy):
        return False
    A2 = _ad_squared(g, y)
    M = qp.rows @ A2 @ pp.rows.T
    s = np.linalg.svd(M, compute_uv=False)
    scale = max(np.linalg.norm(A2, 2), np.finfo(float).tiny)
    return bool(s.size and s[-1] > tol.rank_rel * scale)


def characteristic_element(p: SubalgebraRep, q: SubalgebraRep, g: AlgebraBasis | None = None, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """z with ad_z = +1 on p-polar, 0 on p cap q, -1 on q-polar."""
    g = p.algebra if g is None else g
    pp, qp = polar(p, g, tol), polar(q, g, tol)
    pq = intersect(p, q, tol)
    blocks, rhs = [], []
    for rep, lam in ((pp, 1.0), (pq, 0.0), (qp, -1.0)):
        for c in rep.rows:
            x = g.element(c)
            # [z, x] = -ad_x(z)
            blocks.append(-g.ad_matrix(x))
            rhs.append(lam * c)
    A = np.vstack(blocks)
    b = np.concatenate(rhs)
    z, *_ = np.linalg.lstsq(A, b, rcond=None)
    resid = np.linalg.norm(A @ z - b)
    if resid > tol.eq_abs * max(1.0, np.sqrt(len(b))):
        raise InconsistencyError(f"characteristic element system inconsistent (residual {resid:.3e})")
    return g.element(z)


# -- exponentials and circles -------------------------------------------------

def exp_nilpotent(y, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Terminating exponential series of a nilpotent matrix."""
    y = np.asarray(y)
    N = y.shape[0]
    out = np.eye(N, dtype=y.dtype)
    term = np.eye(N, dtype=y.dtype)
    scale = max(1.0, np.linalg.norm(y))
    if np.linalg.norm(np.linalg.matrix_power(y / scale, N)) > tol.eq_abs:
        raise DomainError("matrix is not nilpotent")
    for j in range(1, N):
        term = term @ y / j
        if not np.any(term):
            break
        out = out + term
    return out


INF = math.inf


def is_inf(t) -> bool:
    return isinstance(t, str) and t == "inf" or (isinstance(t, (float, int)) and math.isinf(t))


def circle_eval(model, y, p_point, q_point, t, tol: Tolerance = DEFAULT_TOL, check: bool = True):
    """c(t) = exp(t y).p for finite t and c(inf) = q."""
    if check and not is_prevalent(y, model.stabilizer(q_point), tol=tol):
        raise DomainError("y is not prevalent for q; the curve would not be a circle")
    if is_inf(t):
        return q_point
    return model.act(exp_nilpotent(float(t) * np.asarray(y), tol), p_point)

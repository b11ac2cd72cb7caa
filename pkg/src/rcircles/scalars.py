"""Scalars over R, C, H and the dense linear algebra shared by every model.

Matrices over R and C are plain numpy arrays.  Quaternionic matrices have a
native form, a real array of shape ``(rows, cols, 4)`` holding ``w + xi + yj + zk``
per entry, and an embedded form used for all computation: each entry becomes
the 2x2 complex block

    q = a + j b  (a, b in C)   ->   [[a, -conj(b)], [b, conj(a)]]

placed at rows ``2r:2r+2`` and columns ``2c:2c+2``.  Column vectors of H^m carry
scalars on the right, so this block form is the matrix of left multiplication on
C^{2m}; sums, products, inverses and matrix exponentials of embedded matrices
stay embedded.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np


class DomainError(ValueError):
    """Input outside the domain of an operation."""


class PreconditionError(ValueError):
    """A mathematical precondition (e.g. pairwise opposite points) fails."""


class InconsistencyError(ArithmeticError):
    """A post-hoc check that theory guarantees has failed numerically."""


class Field(str, enum.Enum):
    R = "R"
    C = "C"
    H = "H"

    @property
    def real_dim(self) -> int:
        return {"R": 1, "C": 2, "H": 4}[self.value]

    @property
    def block(self) -> int:
        """Size of the complex block representing one scalar."""
        return 2 if self is Field.H else 1


@dataclass(frozen=True)
class Tolerance:
    rank_rel: float = 1e-10
    eq_abs: float = 1e-8

    def __post_init__(self):
        if not (self.rank_rel > 0 and self.eq_abs > 0):
            raise DomainError("tolerances must be strictly positive")


DEFAULT_TOL = Tolerance()


# -- quaternions ------------------------------------------------------------

def qmul(p, q):
    """Hamilton product of quaternion arrays with a trailing axis of length 4."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    w1, x1, y1, z1 = np.moveaxis(p, -1, 0)
    w2, x2, y2, z2 = np.moveaxis(q, -1, 0)
    return np.stack([
        w1 * w2 - x1 * x2 - y1 * y2 - z1 * z2,
        w1 * x2 + x1 * w2 + y1 * z2 - z1 * y2,
        w1 * y2 - x1 * z2 + y1 * w2 + z1 * x2,
        w1 * z2 + x1 * y2 - y1 * x2 + z1 * w2,
    ], axis=-1)


def qconj(q):
    q = np.asarray(q, dtype=float)
    return q * np.array([1.0, -1.0, -1.0, -1.0])


def qmatmul(A, B):
    """Product of native quaternion matrices, shapes (r, k, 4) @ (k, c, 4)."""
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    return qmul(A[:, :, None, :], B[None, :, :, :]).sum(axis=1)


def embed(Q) -> np.ndarray:
    """Complex embedding of a native quaternion matrix (r, c, 4) -> (2r, 2c)."""
    Q = np.asarray(Q, dtype=float)
    if Q.ndim != 3 or Q.shape[-1] != 4:
        raise DomainError(f"expected a quaternion array of shape (r, c, 4), got {Q.shape}")
    r, c, _ = Q.shape
    a = Q[..., 0] + 1j * Q[..., 1]
    b = Q[..., 2] - 1j * Q[..., 3]
    out = np.empty((2 * r, 2 * c), dtype=complex)
    out[0::2, 0::2] = a
    out[0::2, 1::2] = -b.conj()
    out[1::2, 0::2] = b
    out[1::2, 1::2] = a.conj()
    return out


quaternion_complex_embed = embed


def unembed(M, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Inverse of :func:`embed`; raises if ``M`` lacks the quaternionic block shape."""
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] % 2 or M.shape[1] % 2:
        raise DomainError("embedded quaternion matrices have even shape")
    a = M[0::2, 0::2]
    b = M[1::2, 0::2]
    scale = max(1.0, np.abs(M).max(initial=0.0))
    if (np.abs(M[1::2, 1::2] - a.conj()).max(initial=0.0) > tol.eq_abs * scale
            or np.abs(M[0::2, 1::2] + b.conj()).max(initial=0.0) > tol.eq_abs * scale):
        raise DomainError("matrix is not the embedding of a quaternion matrix")
    return np.stack([a.real, a.imag, b.real, -b.imag], axis=-1)


def jmap_matrix(m: int) -> np.ndarray:
    """Matrix K with x.j = K conj(x) for embedded column vectors of H^m."""
    return np.kron(np.eye(m), np.array([[0.0, -1.0], [1.0, 0.0]]))


def is_quaternionic(M, tol: Tolerance = DEFAULT_TOL) -> bool:
    M = np.asarray(M)
    if M.shape[0] % 2 or M.shape[1] % 2:
        return False
    K_left = jmap_matrix(M.shape[0] // 2)
    K_right = jmap_matrix(M.shape[1] // 2)
    return np.abs(M @ K_right - K_left @ M.conj()).max(initial=0.0) <= tol.eq_abs * max(1.0, np.abs(M).max(initial=0.0))


QUNITS = np.eye(4)  # 1, i, j, k as native quaternions


def scalar_block(q, field: Field) -> np.ndarray:
    """The b x b complex block of a scalar (quaternion given natively)."""
    if field is Field.H:
        return embed(np.asarray(q, dtype=float).reshape(1, 1, 4))
    return np.array([[q]], dtype=complex)


# -- adjoints over each field -------------------------------------------------

def star(M, sigma: str = "conj") -> np.ndarray:
    """Transpose (``sigma='id'``) or conjugate transpose (``sigma='conj'``)."""
    M = np.asarray(M)
    return M.T if sigma == "id" else M.conj().T


# -- rank and kernel ----------------------------------------------------------

def _svd_rank(M, tol: Tolerance):
    M = np.asarray(M)
    if M.size == 0:
        return 0, np.zeros(0), np.eye(M.shape[1], dtype=M.dtype) if M.ndim == 2 else None
    _, s, vh = np.linalg.svd(M, full_matrices=True)
    smax = s[0] if s.size else 0.0
    rank = int(np.sum(s > tol.rank_rel * smax)) if smax > 0 else 0
    return rank, s, vh


def real_rank(M, tol: Tolerance = DEFAULT_TOL) -> int:
    return _svd_rank(M, tol)[0]


def real_kernel(M, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal columns spanning the (numerical) kernel of a real or complex matrix."""
    M = np.asarray(M)
    n = M.shape[1]
    if M.shape[0] == 0:
        return np.eye(n, dtype=M.dtype)
    rank, _, vh = _svd_rank(M, tol)
    return vh[rank:].conj().T


def quaternionic_basis(K, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal embedded H-basis (2m x 2k) of a j-invariant complex subspace.

    ``K`` holds complex columns spanning a subspace of C^{2m} closed under the
    right j-multiplication; the result pairs each vector ``v`` with ``v.j``.
    """
    K = np.asarray(K, dtype=complex)
    m2 = K.shape[0]
    Jm = jmap_matrix(m2 // 2)
    cols = []
    space = K
    while space.shape[1] > 0:
        v = space[:, 0] / np.linalg.norm(space[:, 0])
        w = Jm @ v.conj()
        cols.extend([v, w])
        pair = np.stack([v, w], axis=1)
        rest = space - pair @ (pair.conj().T @ space)
        if rest.size == 0:
            break
        u, s, _ = np.linalg.svd(rest, full_matrices=False)
        keep = s > max(tol.rank_rel, 1e-12) * max(1.0, s[0] if s.size else 0.0)
        space = u[:, keep]
    if not cols:
        return np.zeros((m2, 0), dtype=complex)
    return np.stack(cols, axis=1)


def rank_kernel(M, tol: Tolerance = DEFAULT_TOL, field: Field | str | None = None):
    """Rank and kernel of a matrix over R, C or H.

    Quaternion matrices are passed natively, shape (r, c, 4); the rank is then
    the H-rank and the kernel is a native (c, k, 4) array of H-orthonormal
    columns.  For R and C the kernel columns are orthonormal in the usual sense.
    """
    M = np.asarray(M)
    if field is None:
        field = Field.H if M.ndim == 3 else (Field.C if np.iscomplexobj(M) else Field.R)
    field = Field(field)
    if field is Field.H:
        E = embed(M)
        rank2 = real_rank(E, tol) if E.size else 0
        K = real_kernel(E, tol) if E.shape[0] else np.eye(E.shape[1], dtype=complex)
        Kq = quaternionic_basis(K, tol)
        native = unembed(Kq) if Kq.shape[1] else np.zeros((M.shape[1], 0, 4))
        return rank2 // 2, native
    if M.ndim != 2:
        raise DomainError("expected a 2-d matrix")
    if M.shape[0] == 0 or M.shape[1] == 0:
        return 0, np.eye(M.shape[1], dtype=M.dtype)
    rank, _, vh = _svd_rank(M, tol)
    kernel = vh[rank:].conj().T
    if field is Field.R:
        kernel = kernel.real
    return rank, kernel


def orth(M, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis of the column span."""
    M = np.asarray(M)
    if M.shape[1] == 0:
        return M
    u, s, _ = np.linalg.svd(M, full_matrices=False)
    if s[0] == 0:
        return u[:, :0]
    return u[:, s > tol.rank_rel * s[0]]


# -- 2x2 oriented SVD ---------------------------------------------------------

def _rot(theta):
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s], [s, c]])


def oriented_svd_2x2(M):
    """``M = U diag(l1, l2) V^T`` with ``U, V`` rotations and ``l1 >= |l2|``.

    ``sign(l2) == sign(det M)``.  Computed from the conformal/anticonformal
    split of ``M`` so every output is exactly a rotation.
    """
    M = np.asarray(M, dtype=float)
    if M.shape != (2, 2):
        raise DomainError("oriented_svd_2x2 expects a 2x2 matrix")
    # M = A + B with A a scaled rotation and B a scaled reflection
    e = (M[0, 0] + M[1, 1]) / 2
    f = (M[0, 0] - M[1, 1]) / 2
    g = (M[1, 0] + M[0, 1]) / 2
    h = (M[1, 0] - M[0, 1]) / 2
    q = np.hypot(e, h)
    r = np.hypot(f, g)
    a1 = np.arctan2(g, f)
    a2 = np.arctan2(h, e)
    theta = (a2 + a1) / 2
    phi = (a2 - a1) / 2
    l1 = q + r
    l2 = q - r
    # M = R(theta) diag(l1, l2) R(phi)  ->  V = R(phi)^T = R(-phi)
    return _rot(theta), l1, l2, _rot(-phi)


# -- misc helpers -------------------------------------------------------------

def random_matrix(rng: np.random.Generator, rows: int, cols: int, field: Field | str) -> np.ndarray:
    """Gaussian random matrix over ``field`` (embedded for H)."""
    field = Field(field)
    if field is Field.R:
        return rng.standard_normal((rows, cols))
    if field is Field.C:
        return (rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))) / np.sqrt(2)
    return embed(rng.standard_normal((rows, cols, 4)) / 2)


def field_eye(n: int, field: Field | str) -> np.ndarray:
    field = Field(field)
    if field is Field.R:
        return np.eye(n)
    return np.eye(n * field.block, dtype=complex)


def fdim(M, field: Field | str) -> int:
    """Number of F-columns of a (possibly embedded) basis matrix."""
    return np.asarray(M).shape[1] // Field(field).block

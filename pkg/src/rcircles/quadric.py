"""Oriented 2-planes in R^N as the complex quadric of null lines in C^N.

psi(u ^ v) = C(u + i v) for an orthonormal frame (u, v).  The bilinear form is
<z, w> = z^T w (no conjugation).  The basis B = {e1 + i e2, e1 - i e2, e3, ...}
has Gram diag(2R, I) with R = [[0, 1], [1, 0]].
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .lie import AlgebraBasis, SubalgebraRep, _kernel_rows, so_complex
from .models import CircleCurve, GeodesicCurve, LieModel
from .scalars import (
    DEFAULT_TOL,
    DomainError,
    InconsistencyError,
    PreconditionError,
    Tolerance,
    oriented_svd_2x2,
)


def bil(z, w) -> complex:
    return complex(np.asarray(z) @ np.asarray(w))


@dataclass(frozen=True, eq=False)
class OrientedPlane:
    frame: np.ndarray  # N x 2 orthonormal

    @property
    def N(self) -> int:
        return self.frame.shape[0]

    @property
    def u(self):
        return self.frame[:, 0]

    @property
    def v(self):
        return self.frame[:, 1]


def oriented_plane(u, v, tol: Tolerance = DEFAULT_TOL) -> OrientedPlane:
    F = np.column_stack([np.asarray(u, dtype=float), np.asarray(v, dtype=float)])
    if np.abs(F.T @ F - np.eye(2)).max() > tol.eq_abs:
        raise DomainError("frame is not orthonormal")
    return OrientedPlane(F)


def plane_from_span(u, v) -> OrientedPlane:
    """Oriented plane of an independent pair, orthonormalized keeping orientation."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    e1 = u / np.linalg.norm(u)
    w = v - (e1 @ v) * e1
    return OrientedPlane(np.column_stack([e1, w / np.linalg.norm(w)]))


def plane_distance(P: OrientedPlane, Q: OrientedPlane) -> float:
    """min over R in SO(2) of ||F_P - F_Q R||_F."""
    if P.N != Q.N:
        return math.inf
    M = Q.frame.T @ P.frame
    th = math.atan2(M[1, 0] - M[0, 1], M[0, 0] + M[1, 1])
    c, s = math.cos(th), math.sin(th)
    R = np.array([[c, -s], [s, c]])
    return float(np.linalg.norm(P.frame - Q.frame @ R))


@dataclass(frozen=True, eq=False)
class NullLine:
    vector: np.ndarray  # canonical: largest-modulus component equal to 1


def null_line(X, tol: Tolerance = DEFAULT_TOL) -> NullLine:
    X = np.asarray(X, dtype=complex)
    nx = np.linalg.norm(X)
    if nx == 0:
        raise DomainError("null lines need a nonzero vector")
    if abs(bil(X, X)) > tol.eq_abs * nx ** 2:
        raise DomainError("vector is not null")
    k = int(np.argmax(np.abs(X)))
    return NullLine(X / X[k])


def psi(P: OrientedPlane) -> NullLine:
    return NullLine(_canon(P.u + 1j * P.v))


def _canon(X):
    k = int(np.argmax(np.abs(X)))
    return X / X[k]


def psi_vector(P: OrientedPlane) -> np.ndarray:
    """Unnormalized representative u + i v (norm sqrt 2)."""
    return P.u + 1j * P.v


def psi_inv(L, tol: Tolerance = DEFAULT_TOL) -> OrientedPlane:
    X = L.vector if isinstance(L, NullLine) else np.asarray(L, dtype=complex)
    nx = np.linalg.norm(X)
    if nx == 0 or abs(bil(X, X)) > tol.eq_abs * nx ** 2:
        raise DomainError("representative is not a nonzero null vector")
    u, v = X.real, X.imag
    return OrientedPlane(np.column_stack([u / np.linalg.norm(u), v / np.linalg.norm(v)]))


@dataclass(frozen=True)
class CharacteristicAngles:
    alpha: float
    beta: float


def _pad(P: OrientedPlane, N: int) -> np.ndarray:
    F = P.frame
    return np.vstack([F, np.zeros((N - F.shape[0], 2))]) if F.shape[0] < N else F


def characteristic_decomposition(P: OrientedPlane, Q: OrientedPlane):
    """(angles, P-frame, Q-frame) with P-frame^T Q-frame = diag(cos a, cos b)."""
    if P.N != Q.N:
        raise DomainError("planes live in different dimensions")
    N = max(P.N, 4)
    Fp, Fq = _pad(P, N), _pad(Q, N)
    U, l1, l2, V = oriented_svd_2x2(Fp.T @ Fq)
    A, B = Fp @ U, Fq @ V
    perp = B - A @ (A.T @ B)
    alpha = math.atan2(np.linalg.norm(perp[:, 0]), A[:, 0] @ B[:, 0])
    beta = math.atan2(np.linalg.norm(perp[:, 1]), A[:, 1] @ B[:, 1])
    return CharacteristicAngles(alpha, beta), A, B


def characteristic_angles(P: OrientedPlane, Q: OrientedPlane) -> CharacteristicAngles:
    return characteristic_decomposition(P, Q)[0]


def opposite_margins(P: OrientedPlane, Q: OrientedPlane):
    """(|<X, Y>|, cos alpha - cos beta) for the representatives u + i v."""
    xy = abs(bil(psi_vector(P), psi_vector(Q)))
    ang, A, B = characteristic_decomposition(P, Q)
    gap = float(A[:, 0] @ B[:, 0] - A[:, 1] @ B[:, 1])
    return xy, gap


def is_opposite_quadric(P: OrientedPlane, Q: OrientedPlane, tol: Tolerance = DEFAULT_TOL) -> bool:
    xy, gap = opposite_margins(P, Q)
    by_form = xy > tol.eq_abs
    by_angles = gap > tol.eq_abs
    if by_form != by_angles and not (tol.eq_abs <= xy <= 10 * tol.eq_abs):
        raise InconsistencyError(f"opposite tests disagree: |<X,Y>| = {xy:.3e}, cos a - cos b = {gap:.3e}")
    return by_form


def adapted_null_basis(X, Y, tol: Tolerance = DEFAULT_TOL):
    """(X, X', Y, Y') with Gram diag(R, R) for null X, Y with <X, Y> = 0."""
    X = np.asarray(X, dtype=complex)
    Y = np.asarray(Y, dtype=complex)
    sx, sy = np.linalg.norm(X), np.linalg.norm(Y)
    if abs(bil(X, X)) > tol.eq_abs * sx ** 2 or abs(bil(Y, Y)) > tol.eq_abs * sy ** 2:
        raise PreconditionError("inputs must be null")
    if abs(bil(X, Y)) > tol.eq_abs * sx * sy:
        raise PreconditionError("inputs must be orthogonal for the bilinear form")
    A = np.vstack([Y, X])
    s = np.linalg.svd(A, compute_uv=False)
    if s[-1] <= tol.rank_rel * s[0]:
        raise InconsistencyError("X-perp equals Y-perp")
    V = np.linalg.lstsq(A, np.array([0, 1], dtype=complex), rcond=None)[0]
    U = np.linalg.lstsq(A[::-1], np.array([0, 1], dtype=complex), rcond=None)[0]
    Xp = V - bil(V, V) / 2 * X
    Yp = U - bil(U, V) * X - bil(U, U) / 2 * Y
    return X, Xp, Y, Yp


def stabilizer_polar_quadric(X, g: AlgebraBasis | None = None, tol: Tolerance = DEFAULT_TOL) -> SubalgebraRep:
    """{T in so(N, C) : T X = 0 and T(X-perp) in C X}."""
    X = np.asarray(X.vector if isinstance(X, NullLine) else X, dtype=complex)
    N = X.shape[0]
    g = so_complex(N, tol) if g is None else g
    x = X / np.linalg.norm(X)
    proj = np.eye(N) - np.outer(x, x.conj())
    _, _, vh = np.linalg.svd(X.reshape(1, -1))
    perp = vh[1:].conj().T  # kernel of X^T
    parts = [g.mats @ X, proj @ g.mats @ perp]
    flat = np.concatenate([p.reshape(g.dim, -1) for p in parts], axis=1)
    M = np.concatenate([flat.real, flat.imag], axis=1).T
    return SubalgebraRep(g, _kernel_rows(M, tol))


# -- basis B and the standard circles -------------------------------------------

def basis_B(N: int) -> np.ndarray:
    Bm = np.eye(N, dtype=complex)
    Bm[:, 0] = [1, 1j] + [0] * (N - 2)
    Bm[:, 1] = [1, -1j] + [0] * (N - 2)
    return Bm


def gram_B(N: int) -> np.ndarray:
    G = np.eye(N, dtype=complex)
    G[:2, :2] = [[0, 2], [2, 0]]
    return G


def z_matrix_B(z) -> np.ndarray:
    """[Z]_B: first column 2z below the first two rows, second row -z^T."""
    z = np.asarray(z, dtype=complex)
    N = z.shape[0] + 2
    Z = np.zeros((N, N), dtype=complex)
    Z[2:, 0] = 2 * z
    Z[1, 2:] = -z
    return Z


def from_B(MB) -> np.ndarray:
    Bm = basis_B(MB.shape[0])
    return Bm @ MB @ np.linalg.inv(Bm)


def to_B(M) -> np.ndarray:
    Bm = basis_B(M.shape[0])
    return np.linalg.inv(Bm) @ M @ Bm


def z_generator(z) -> np.ndarray:
    """Z in standard coordinates for a given z in C^{N-2}."""
    return from_B(z_matrix_B(z))


def exp_z_closed_form_B(z, t: float) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    N = z.shape[0] + 2
    E = np.eye(N, dtype=complex)
    E[1, 0] = -t * t * (z @ z)
    E[1, 2:] = -t * z
    E[2:, 0] = 2 * t * z
    return E


@dataclass(frozen=True)
class QuadricCircleData:
    frame: np.ndarray  # N x 4 columns eps1, eps2, u, v
    alpha: float
    beta: float

    @property
    def a(self) -> float:
        return math.sin(self.alpha) / (math.cos(self.alpha) + math.cos(self.beta))

    @property
    def b(self) -> float:
        return math.sin(self.beta) / (math.cos(self.alpha) + math.cos(self.beta))

    @property
    def C(self) -> float:
        ca, cb = math.cos(self.alpha), math.cos(self.beta)
        return (ca - cb) / (ca + cb)


def standard_frame(N: int) -> np.ndarray:
    return np.eye(N)[:, :4]


def circle_data(alpha: float, beta: float, frame=None, tol: Tolerance = DEFAULT_TOL) -> QuadricCircleData:
    if not (alpha >= -tol.eq_abs and beta - alpha > tol.eq_abs and math.pi - (alpha + beta) > tol.eq_abs):
        raise PreconditionError("need 0 <= alpha < beta and alpha + beta < pi")
    F = standard_frame(4) if frame is None else np.asarray(frame, dtype=float)
    if np.abs(F.T @ F - np.eye(4)).max() > tol.eq_abs:
        raise DomainError("circle frame must be orthonormal")
    return QuadricCircleData(F, float(alpha), float(beta))


def angles_from_ab(a: float, b: float):
    """(alpha, beta) whose circle data has the given a, b (0 <= a < b)."""
    if not (0 <= a < b):
        raise DomainError("need 0 <= a < b")
    C = b * b - a * a
    return math.atan2(2 * a, 1 + C), math.atan2(2 * b, 1 - C)


def p1_plane(data: QuadricCircleData) -> OrientedPlane:
    e1, e2, u, v = data.frame.T
    ca, sa, cb, sb = math.cos(data.alpha), math.sin(data.alpha), math.cos(data.beta), math.sin(data.beta)
    return OrientedPlane(np.column_stack([ca * e1 + sa * u, cb * e2 + sb * v]))


def circle_standard(data: QuadricCircleData) -> CircleCurve:
    """t -> (u_t ^ v_t) / |u_t|^2 with the explicit u_t, v_t."""
    e1, e2, u, v = data.frame.T
    a, b, C = data.a, data.b, data.C

    def c(t):
        ut = (1 + t * t * C) * e1 + 2 * t * a * u
        vt = (1 - t * t * C) * e2 + 2 * t * b * v
        return OrientedPlane(np.column_stack([ut / np.linalg.norm(ut), vt / np.linalg.norm(vt)]))

    P0 = OrientedPlane(np.column_stack([e1, e2]))
    Q = OrientedPlane(np.column_stack([e2, e1]))
    return CircleCurve("quadric", P0, p1_plane(data), Q, c)


def c_simple(N: int = 4):
    """t -> e1 ^ ((1 - t^2)/(1 + t^2) e2 + 2t/(1 + t^2) e4)."""
    e = np.eye(N)

    def c(t):
        return OrientedPlane(np.column_stack([e[0], ((1 - t * t) * e[1] + 2 * t * e[3]) / (1 + t * t)]))

    return CircleCurve("quadric", c(0.0), c(1.0), OrientedPlane(np.column_stack([e[1], e[0]])), c)


def geodesic_gamma0(N: int = 4) -> GeodesicCurve:
    if N < 4:
        raise DomainError("needs N >= 4")
    e = np.eye(N)
    return GeodesicCurve("quadric", lambda s: OrientedPlane(
        np.column_stack([e[0], math.cos(2 * math.pi * s) * e[1] + math.sin(2 * math.pi * s) * e[3]])))


# -- reduction of a general triple ------------------------------------------------

def _bilinear_orthonormal(W, tol: Tolerance) -> np.ndarray:
    """Columns w_i of span W with w_i^T w_j = delta_ij (pivoted Gram-Schmidt)."""
    cols = [W[:, k] for k in range(W.shape[1])]
    out = []
    while cols:
        # enlarge the candidate pool with pairwise sums so a non-isotropic pivot exists
        cands = [(k, c) for k, c in enumerate(cols)]
        cands += [(k, cols[k] + cols[j]) for k in range(len(cols)) for j in range(len(cols)) if j != k]
        cands += [(k, cols[k] + 1j * cols[j]) for k in range(len(cols)) for j in range(len(cols)) if j != k]
        k, w = max(cands, key=lambda kc: abs(bil(kc[1], kc[1])) / np.linalg.norm(kc[1]) ** 2)
        q = bil(w, w)
        if abs(q) <= tol.rank_rel * np.linalg.norm(w) ** 2:
            raise InconsistencyError("complement of the hyperbolic plane is degenerate")
        w = w / np.sqrt(q)
        rest = [c for j, c in enumerate(cols) if j != k]
        cols = [c - bil(w, c) * w for c in rest]
        out.append(w)
    return np.column_stack(out) if out else np.zeros((W.shape[0], 0), dtype=complex)


def reduction_to_standard(X, Y, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """g in SO(N, C) with g X in C(e1 + i e2) and g Y in C(e1 - i e2)."""
    X = np.asarray(X, dtype=complex)
    Y = np.asarray(Y, dtype=complex)
    N = X.shape[0]
    xy = bil(X, Y)
    if abs(xy) <= tol.eq_abs * np.linalg.norm(X) * np.linalg.norm(Y):
        raise PreconditionError("points are not opposite")
    Y2 = 2 * Y / xy
    _, _, vh = np.linalg.svd(np.vstack([X, Y]))
    comp = _bilinear_orthonormal(vh[2:].conj().T, tol)
    M = np.column_stack([X, Y2, comp])
    g = basis_B(N) @ np.linalg.inv(M)
    if np.linalg.det(g).real < 0:
        M[:, -1] *= -1
        g = basis_B(N) @ np.linalg.inv(M)
    return g


def _standard_z(g, P1: OrientedPlane, tol: Tolerance) -> np.ndarray:
    W = g @ psi_vector(P1)
    lead = bil(W, np.array([1, -1j] + [0] * (len(W) - 2))) / 2
    if abs(lead) <= tol.eq_abs * np.linalg.norm(W):
        raise PreconditionError("P1 is not opposite to Q")
    W = W / lead
    return W[2:] / 2


@dataclass(frozen=True, eq=False)
class QuadricCircle:
    """The circle through (P0, P1, Q) with its reduction data."""

    g: np.ndarray
    z: np.ndarray
    curve: CircleCurve

    @property
    def generator(self) -> np.ndarray:
        """y in the polar of the stabilizer of Q with c(t) = exp(t y) P0."""
        return np.linalg.inv(self.g) @ z_generator(self.z) @ self.g


def circle_through_quadric_data(P0, P1, Q, tol: Tolerance = DEFAULT_TOL) -> QuadricCircle:
    for (A, B), name in (((P0, P1), "P0, P1"), ((P0, Q), "P0, Q"), ((P1, Q), "P1, Q")):
        if not is_opposite_quadric(A, B, tol):
            raise PreconditionError(f"points {name} are not opposite")
    g = reduction_to_standard(psi_vector(P0), psi_vector(Q), tol)
    z = _standard_z(g, P1, tol)
    zz = complex(z @ z)
    if abs(zz) < tol.eq_abs:
        raise InconsistencyError("z^T z vanishes for an opposite triple")
    ginv = np.linalg.inv(g)
    N = len(z) + 2
    b1 = basis_B(N)[:, 0]
    b2 = basis_B(N)[:, 1]
    zfull = np.concatenate([[0, 0], z])

    def c(t):
        return psi_inv(ginv @ (b1 - t * t * zz * b2 + 2 * t * zfull), Tolerance(tol.rank_rel, 1e-6))

    return QuadricCircle(g, z, CircleCurve("quadric", P0, P1, Q, c))


def circle_through_quadric(P0, P1, Q, tol: Tolerance = DEFAULT_TOL) -> CircleCurve:
    return circle_through_quadric_data(P0, P1, Q, tol).curve


# -- conjugating element and geodesics -------------------------------------------

def rotation_completing(u, v) -> np.ndarray:
    """R in SO(N) fixing e1, e2 with R e3 = u and R e4 = v."""
    u, v = np.asarray(u, dtype=float), np.asarray(v, dtype=float)
    N = u.shape[0]
    e = np.eye(N)
    A = np.column_stack([e[0], e[1], u, v])
    _, _, vh = np.linalg.svd(A.T)
    rest = vh[4:].T
    R = np.column_stack([A, rest])
    if np.linalg.det(R) < 0:
        if rest.shape[1]:
            R[:, -1] *= -1
        else:
            raise DomainError("frame e1, e2, u, v is negatively oriented in R^4")
    return R


def conjugating_element(a: float, b: float, u=None, v=None, N: int = 4, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """O in SO(N, C) with Ad(O) Z_{i e4} = Z_{a u + i b v}; standard coordinates.

    In basis B (with u = e3, v = e4) O = diag(1/r, r, R_sigma, I),
    r = sqrt(b^2 - a^2), tanh sigma = a / b.
    """
    if not (0 <= a < b):
        raise DomainError("need 0 <= a < b")
    if u is not None:
        N = len(u)
    r = math.sqrt(b * b - a * a)
    sg = math.atanh(a / b)
    OB = np.eye(N, dtype=complex)
    OB[0, 0], OB[1, 1] = 1 / r, r
    OB[2:4, 2:4] = [[math.cosh(sg), -1j * math.sinh(sg)], [1j * math.sinh(sg), math.cosh(sg)]]
    O = from_B(OB)
    if u is not None:
        R = rotation_completing(u, v)
        O = R @ O @ R.T
    if np.abs(O.T @ O - np.eye(N)).max() > tol.eq_abs:
        raise InconsistencyError("conjugating element does not preserve the form")
    return O


def c_simple_frame(v) -> CircleCurve:
    """The simple circle with e4 replaced by the unit vector v."""
    v = np.asarray(v, dtype=float)
    e = np.eye(len(v))

    def c(t):
        return OrientedPlane(np.column_stack([e[0], ((1 - t * t) * e[1] + 2 * t * v) / (1 + t * t)]))

    return CircleCurve("quadric", c(0.0), c(1.0), OrientedPlane(np.column_stack([e[1], e[0]])), c)


def act_plane(g, P: OrientedPlane, tol: Tolerance = DEFAULT_TOL) -> OrientedPlane:
    return psi_inv(np.asarray(g) @ psi_vector(P), Tolerance(tol.rank_rel, max(tol.eq_abs, 1e-6)))


def stabilizer_element(z, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """D = diag(lam, 1/lam, A) in basis B with Ad(D) Z_{i e4} = Z_z.

    D fixes the lines C(e1 + i e2) and C(e1 - i e2) and acts on z by
    z -> A z / lam; here A in SO(N - 2, C) sends i e4 to lam z, lam^2 = -1/z^T z.
    """
    z = np.asarray(z, dtype=complex)
    n = z.shape[0]
    zz = complex(z @ z)
    if abs(zz) <= tol.eq_abs:
        raise DomainError("z must satisfy z^T z != 0")
    lam = np.sqrt(-1.0 / zz)
    f = -1j * lam * z  # f^T f = 1
    _, _, vh = np.linalg.svd(f.reshape(1, -1))
    rest = _bilinear_orthonormal(vh[1:].conj().T, tol)
    A = np.column_stack([rest[:, 0], f] + [rest[:, k] for k in range(1, n - 1)])
    if np.linalg.det(A).real < 0:
        A[:, 0] *= -1
    DB = np.eye(n + 2, dtype=complex)
    DB[0, 0], DB[1, 1] = lam, 1 / lam
    DB[2:, 2:] = A
    return from_B(DB)


def geodesic_through_quadric(P0, P1, Q, tol: Tolerance = DEFAULT_TOL) -> GeodesicCurve:
    """h . gamma_0 with h in SO(N, C) carrying the simple circle onto the circle through the triple."""
    data = circle_through_quadric_data(P0, P1, Q, tol)
    N = len(data.z) + 2
    h = np.linalg.inv(data.g) @ stabilizer_element(data.z, tol)
    g0 = geodesic_gamma0(N)
    return GeodesicCurve("quadric", lambda s: act_plane(h, g0(s), tol))


# -- model ----------------------------------------------------------------------

class QuadricModel(LieModel):
    def __init__(self, N: int, tol: Tolerance = DEFAULT_TOL):
        super().__init__(tol)
        if N < 4:
            raise DomainError("the quadric model needs N >= 4")
        self.N = N
        self.name = "quadric"

    @property
    def algebra(self) -> AlgebraBasis:
        return so_complex(self.N, self.tol)

    def line(self, point: OrientedPlane):
        return psi_vector(point).reshape(-1, 1)

    def act(self, g, point):
        return act_plane(g, point, self.tol)

    def distance(self, a, b):
        return plane_distance(a, b)

    def is_opposite(self, a, b):
        return is_opposite_quadric(a, b, self.tol)

    def standard_pair(self):
        e = np.eye(self.N)
        return OrientedPlane(np.column_stack([e[0], e[1]])), OrientedPlane(np.column_stack([e[1], e[0]]))

    def sample_qperp(self, rng, degenerate=False):
        n = self.N - 2
        if degenerate:
            if rng.random() < 0.2:
                z = np.zeros(n, dtype=complex)
            else:
                p = rng.standard_normal(n)
                q = rng.standard_normal(n)
                q -= (q @ p) / (p @ p) * p
                q *= np.linalg.norm(p) / np.linalg.norm(q)
                z = p + 1j * q
        else:
            z = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        return z_generator(z)

    def random_plane(self, rng) -> OrientedPlane:
        A = rng.standard_normal((self.N, 2))
        return plane_from_span(A[:, 0], A[:, 1])

    def circle_through(self, p, p1, q):
        return circle_through_quadric(p, p1, q, self.tol)

    def geodesic_through(self, p, p1, q):
        return geodesic_through_quadric(p, p1, q, self.tol)

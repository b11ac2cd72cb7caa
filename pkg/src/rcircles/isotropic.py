"""Split (sigma, eps)-forms, their isotropic Grassmannians, and compactly adapted J.

A form is f(x, y) = x^* G y with * the transpose (sigma = id) or the conjugate
transpose (sigma = conj).  Quaternionic data are complex embeddings, for which
the conjugate transpose is the quaternionic one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .grassmann import ConnectingIso, SubspacePoint, connecting_iso, is_opposite_gr
from .lie import AlgebraBasis, form_algebra
from .models import CircleCurve, GeodesicCurve, LieModel
from .scalars import (
    DEFAULT_TOL,
    DomainError,
    Field,
    InconsistencyError,
    PreconditionError,
    Tolerance,
    embed,
    field_eye,
    random_matrix,
    star,
)

FAMILIES = {
    "c_symmetric": (Field.C, "id", 1),
    "r_symplectic": (Field.R, "id", -1),
    "c_symplectic": (Field.C, "id", -1),
    "r_hermitian": (Field.R, "conj", 1),
    "c_hermitian": (Field.C, "conj", 1),
    "h_hermitian": (Field.H, "conj", 1),
    "h_skew_hermitian": (Field.H, "conj", -1),
}

# families whose isotropic Grassmannian is self-dual only for even n
EVEN_ONLY = {"c_symmetric", "r_hermitian"}


def _scale(*mats) -> float:
    return max([1.0] + [float(np.abs(M).max(initial=0.0)) for M in mats])


@dataclass(frozen=True, eq=False)
class SplitForm:
    family: str
    n: int
    field: Field
    sigma: str
    eps: int
    gram: np.ndarray = field(repr=False)

    def star(self, M) -> np.ndarray:
        return star(M, self.sigma)

    def pair(self, X, Y) -> np.ndarray:
        """Matrix of f on the columns of X and Y."""
        return self.star(X) @ self.gram @ Y

    @property
    def self_dual(self) -> bool:
        return not (self.family in EVEN_ONLY and self.n % 2)

    def isotropy_residual(self, B) -> float:
        return float(np.abs(self.pair(B, B)).max(initial=0.0) / _scale(B) ** 2)


def standard_form(family: str, n: int, frame=None) -> SplitForm:
    """The standard split form on F^{2n}; ``frame`` K rewrites it as K^{-*} G K^{-1}."""
    if family not in FAMILIES:
        raise DomainError(f"unknown form family {family!r}; choose from {sorted(FAMILIES)}")
    if n < 1:
        raise DomainError("n must be positive")
    F, sigma, eps = FAMILIES[family]
    m = n * F.block
    I = np.eye(m)
    G = np.block([[np.zeros((m, m)), I], [eps * I, np.zeros((m, m))]])
    if F is not Field.R:
        G = G.astype(complex)
    if frame is not None:
        Kinv = np.linalg.inv(frame)
        G = star(Kinv, sigma) @ G @ Kinv
    return SplitForm(family, n, F, sigma, eps, G)


def isotropic_subspace(f: SplitForm, basis, tol: Tolerance = DEFAULT_TOL) -> SubspacePoint:
    B = np.asarray(basis)
    if B.shape != (2 * f.n * f.field.block, f.n * f.field.block):
        raise DomainError("maximal isotropic subspaces have dimension n in F^{2n}")
    if f.isotropy_residual(B) > tol.eq_abs:
        raise DomainError("subspace is not isotropic for the form")
    return SubspacePoint(f.field, B)


def dual_basis(U, W, f: SplitForm, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Basis V of span W with f(u_i, v_j) = delta_ij."""
    U, W = np.asarray(U), np.asarray(W)
    A = f.pair(U, W)
    s = np.linalg.svd(A, compute_uv=False)
    if s[-1] <= tol.rank_rel * s[0]:
        raise PreconditionError("P and Q are not complementary")
    return W @ np.linalg.inv(A)


@dataclass(frozen=True, eq=False)
class CompatibleJ:
    """J z = matrix z (linear) or matrix conj(z) (antilinear)."""

    matrix: np.ndarray
    antilinear: bool
    form: SplitForm

    def __call__(self, z) -> np.ndarray:
        z = np.asarray(z)
        return self.matrix @ (z.conj() if self.antilinear else z)

    def square(self) -> np.ndarray:
        Jm = self.matrix
        return Jm @ (Jm.conj() if self.antilinear else Jm)

    def d_gram(self) -> np.ndarray:
        """Gram matrix of D(x, y) = f(J x, y) as a sesquilinear form x^H D y."""
        Jm, G = self.matrix, self.form.gram
        return Jm.T @ G if self.antilinear else Jm.conj().T @ G

    def commutes_with(self, A) -> np.ndarray:
        Jm = self.matrix
        A = np.asarray(A)
        return Jm @ A.conj() - A @ Jm if self.antilinear else Jm @ A - A @ Jm

    def invariant_residuals(self) -> dict:
        f = self.form
        Jm, G = self.matrix, f.gram
        I = np.eye(Jm.shape[0])
        sq = float(np.abs(self.square() - f.eps * I).max())
        if self.antilinear:
            compat = float(np.abs(Jm.T @ G @ Jm - G.conj()).max())
        else:
            compat = float(np.abs(Jm.conj().T @ G @ Jm - G).max())
        D = self.d_gram()
        herm = float(np.abs(D - D.conj().T).max())
        ev = np.linalg.eigvalsh((D + D.conj().T) / 2)
        sign = int(np.sign(ev[0])) if np.all(np.sign(ev) == np.sign(ev[0])) and ev[0] != 0 else 0
        return {"square": sq, "compat": compat, "hermitian": herm, "definite_sign": sign,
                "min_abs_eig": float(np.abs(ev).min())}


def build_J(U, V, f: SplitForm, tol: Tolerance = DEFAULT_TOL) -> CompatibleJ:
    """The sigma-bar-linear J with J u_i = v_i and J v_i = eps u_i."""
    U, V = np.asarray(U), np.asarray(V)
    B = np.hstack([U, V])
    images = np.hstack([V, f.eps * U])
    antilinear = f.sigma == "id" and f.field is Field.C
    Binv = np.linalg.inv(B)
    Jm = images @ (Binv.conj() if antilinear else Binv)
    J = CompatibleJ(Jm, antilinear, f)
    r = J.invariant_residuals()
    scale = _scale(Jm) ** 2 * _scale(f.gram)
    if max(r["square"], r["compat"], r["hermitian"]) > tol.eq_abs * scale:
        raise InconsistencyError(f"J fails its defining identities: {r}")
    if r["definite_sign"] != f.eps:
        raise InconsistencyError("D = f(J., .) is not definite with sign eps")
    return J


# -- circles ------------------------------------------------------------------

def tskew_residual(T: ConnectingIso, f: SplitForm) -> float:
    U, TU = T.P.basis, T.image_basis()
    R = f.pair(TU, U) + f.pair(U, TU)
    return float(np.abs(R).max() / (_scale(U) * _scale(TU) * _scale(f.gram)))


def _check_iso_triple(f: SplitForm, pts, tol: Tolerance):
    for X in pts:
        if f.isotropy_residual(X.basis) > tol.eq_abs:
            raise PreconditionError("input subspace is not isotropic")
    P, P1, Q = pts
    for (A, B), name in (((P, P1), "P, P1"), ((P, Q), "P, Q"), ((P1, Q), "P1, Q")):
        if not is_opposite_gr(A, B, tol):
            raise PreconditionError(f"points {name} are not complementary")


def graph_curve(T: ConnectingIso, name: str = "isotropic") -> CircleCurve:
    U, TU, F = T.P.basis, T.image_basis(), T.P.field
    P1 = SubspacePoint(F, U + TU)
    return CircleCurve(name, T.P, P1, T.Q, lambda t: SubspacePoint(F, U + t * TU))


def circle_through_iso(P, P1, Q, f: SplitForm, tol: Tolerance = DEFAULT_TOL):
    """(T, c) with c(t) = {x + t T x : x in P}; T is checked to be f-skew."""
    if not f.self_dual:
        raise DomainError("this isotropic Grassmannian is not self-dual; circles are not defined")
    _check_iso_triple(f, (P, P1, Q), tol)
    T = connecting_iso(P, P1, Q, tol)
    if tskew_residual(T, f) > tol.eq_abs:
        raise InconsistencyError("connecting map is not f-skew")
    c = graph_curve(T)
    return T, CircleCurve("isotropic", P, P1, Q, c.fn)


# -- adapted basis and S --------------------------------------------------------

def _units(F: Field):
    if F is Field.R:
        return [np.eye(1)]
    if F is Field.C:
        return [np.eye(1, dtype=complex), 1j * np.eye(1)]
    return [embed(u.reshape(1, 1, 4)) for u in np.eye(4)]


def _quat_rotor(w) -> np.ndarray:
    """Unit quaternion mu (native) with conj(mu) w mu = i for a unit pure quaternion w."""
    one, qi = np.array([1.0, 0, 0, 0]), np.array([0, 1.0, 0, 0])
    from .scalars import qmul
    mu = one - qmul(w, qi)
    nm = np.linalg.norm(mu)
    if nm < 1e-6:  # w = -i
        return np.array([0, 0, 1.0, 0])
    return mu / nm


def _block_to_quat(B) -> np.ndarray:
    a, b = B[0, 0], B[1, 0]
    return np.array([a.real, a.imag, b.real, -b.imag])


def _normalize_diag(hx, f: SplitForm):
    """(mu, d): h(x mu, x mu) = d in normal form, for the diagonal branches."""
    F, b = f.field, f.field.block
    if F is Field.H:
        w = _block_to_quat(hx)
        if f.eps == -1:  # Hermitian: real scalar
            a = w[0]
            return np.eye(2) / math.sqrt(abs(a)), np.sign(a) * np.eye(2)
        v = w.copy()
        v[0] = 0.0
        r = np.linalg.norm(v)
        mu = _quat_rotor(v / r)
        return embed(mu.reshape(1, 1, 4)) / math.sqrt(r), embed(np.array([[[0, 1.0, 0, 0]]]))
    a = hx[0, 0]
    if f.sigma == "id" and F is Field.C:  # complex symmetric
        mu = 1.0 / np.sqrt(complex(a))
        return np.array([[mu]]), np.eye(1, dtype=complex)
    if f.eps == -1 or F is Field.R:  # real symmetric or Hermitian
        a = a.real
        return np.array([[1.0 / math.sqrt(abs(a))]]), np.array([[np.sign(a)]])
    al = a.imag  # skew-Hermitian over C
    return np.array([[1.0 / math.sqrt(abs(al))]]), np.array([[1j * np.sign(al)]])


def congruence_normal_form(M, f: SplitForm, tol: Tolerance = DEFAULT_TOL):
    """W with W^* M W in normal form.

    M is the matrix of h(x, y) = f(x, T y), which is (-eps)-symmetric.  The
    normal forms are diag(+-1) for Hermitian or real symmetric h, I for complex
    symmetric h, diag(+-i) for complex skew-Hermitian h, diag(i) for quaternionic
    skew-Hermitian h, and [[0, I], [-I, 0]] for skew bilinear h.
    """
    M = np.asarray(M)
    F, b = f.field, f.field.block
    n = M.shape[0] // b
    sym = f.sigma == "id" or F is Field.R
    skew_bilinear = f.eps == 1 and sym
    units = _units(F)
    cols = [np.eye(n * b, dtype=M.dtype)[:, i * b:(i + 1) * b] for i in range(n)]
    hstar = lambda x, y: star(x, "id" if sym else "conj") @ M @ y  # noqa: E731
    scale = _scale(M)
    if skew_bilinear:
        if n % 2:
            raise DomainError("skew form h requires even n")
        xs, ys = [], []
        while cols:
            best, pair = -1.0, None
            for i in range(len(cols)):
                for j in range(i + 1, len(cols)):
                    v = abs(hstar(cols[i], cols[j])[0, 0])
                    if v > best:
                        best, pair = v, (i, j)
            if best <= tol.rank_rel * scale:
                raise InconsistencyError("h is degenerate; T is singular")
            i, j = pair
            x, y = cols[i], cols[j]
            y = y / hstar(x, y)[0, 0]
            rest = [c for k, c in enumerate(cols) if k not in (i, j)]
            cols = [z + x * hstar(y, z)[0, 0] - y * hstar(x, z)[0, 0] for z in rest]
            xs.append(x)
            ys.append(y)
        W = np.hstack(xs + ys)
        k = n // 2
        I = np.eye(k)
        NF = np.block([[np.zeros((k, k)), I], [-I, np.zeros((k, k))]])
        return W, NF.astype(M.dtype)
    chosen, diag = [], []
    while cols:
        best, cand = -1.0, None
        m = len(cols)
        for i in range(m):
            trial = [cols[i]] + [cols[i] + cols[j] @ lam for j in range(m) if j != i for lam in units]
            for x in trial:
                v = np.linalg.norm(hstar(x, x))
                if v > best:
                    best, cand = v, (i, x)
        if best <= tol.rank_rel * scale:
            raise InconsistencyError("h is degenerate; T is singular")
        i, x = cand
        mu, d = _normalize_diag(hstar(x, x), f)
        x = x @ mu
        dinv = np.linalg.inv(d)
        rest = [c for k, c in enumerate(cols) if k != i]
        cols = [z - x @ dinv @ hstar(x, z) for z in rest]
        chosen.append(x)
        diag.append(d)
    W = np.hstack(chosen)
    NF = np.zeros((n * b, n * b), dtype=complex if F is not Field.R else float)
    for k, d in enumerate(diag):
        NF[k * b:(k + 1) * b, k * b:(k + 1) * b] = d
    return W, NF


@dataclass(frozen=True, eq=False)
class AdaptedData:
    basis: np.ndarray
    dual: np.ndarray
    J: CompatibleJ
    S: np.ndarray
    normal_form: np.ndarray


def s_generator(U, TU) -> np.ndarray:
    """S with S|_P = T and S|_Q = -T^{-1}."""
    return np.hstack([TU, -U]) @ np.linalg.inv(np.hstack([U, TU]))


def adapted_basis_and_S(T: ConnectingIso, f: SplitForm, tol: Tolerance = DEFAULT_TOL) -> AdaptedData:
    if tskew_residual(T, f) > tol.eq_abs:
        raise PreconditionError("T is not f-skew")
    U, TU = T.P.basis, T.image_basis()
    M = f.pair(U, TU)
    W, NF = congruence_normal_form(M, f, tol)
    U2 = U @ W
    TU2 = TU @ W
    M2 = f.pair(U2, TU2)
    if np.abs(M2 - NF).max() > tol.eq_abs * _scale(M2):
        raise InconsistencyError("congruence normal form not reached")
    V = TU2 @ np.linalg.inv(M2)
    J = build_J(U2, V, f, tol)
    S = s_generator(U2, TU2)
    scale = _scale(S) * _scale(J.matrix)
    if np.abs(J.commutes_with(S)).max() > tol.eq_abs * scale:
        raise InconsistencyError("S does not commute with J")
    if np.abs(f.star(S) @ f.gram + f.gram @ S).max() > tol.eq_abs * _scale(S) * _scale(f.gram):
        raise InconsistencyError("S is not f-skew")
    return AdaptedData(U2, V, J, S, NF)


def exp_s(S, s: float) -> np.ndarray:
    """exp(s S) for S^2 = -I."""
    return math.cos(s) * np.eye(S.shape[0]) + math.sin(s) * S


def geodesic_iso(T: ConnectingIso, f: SplitForm, tol: Tolerance = DEFAULT_TOL) -> GeodesicCurve:
    """s' -> exp(pi s' S) P, period 1 as a curve of subspaces.

    S restricted to P is T, so exp(s S) U = cos s U + sin s T U; evaluating it this
    way avoids the inverse of [U, T U] hidden in S.  S itself is still built and
    checked to lie in the commutant of J.
    """
    adapted_basis_and_S(T, f, tol)
    U, TU, F = T.P.basis, T.image_basis(), f.field
    return GeodesicCurve("isotropic", lambda s: SubspacePoint(
        F, math.cos(math.pi * s) * U + math.sin(math.pi * s) * TU))


# -- model ----------------------------------------------------------------------

class IsotropicModel(LieModel):
    def __init__(self, family: str, n: int, tol: Tolerance = DEFAULT_TOL, frame=None):
        super().__init__(tol)
        self.form = standard_form(family, n, frame)
        self.family, self.n = family, n
        self.field = self.form.field
        m = 2 * n * self.field.block
        self.frame = np.eye(m) if frame is None else np.asarray(frame)
        self._frame_inv = np.linalg.inv(self.frame)
        self.name = "isotropic"

    @property
    def algebra(self) -> AlgebraBasis:
        f = self.form
        return form_algebra(f"u({f.family},{f.n})", f.gram, f.field, f.sigma, self.tol)

    def line(self, point):
        return point.basis

    def act(self, g, point):
        g = np.asarray(g)
        if self.field is Field.R:
            g = g.real
        return SubspacePoint(self.field, g @ point.basis)

    def distance(self, a, b):
        from .grassmann import subspace_distance
        return subspace_distance(a, b)

    def is_opposite(self, a, b):
        return is_opposite_gr(a, b, self.tol)

    def standard_pair(self):
        I = field_eye(2 * self.n, self.field)
        k = self.n * self.field.block
        K = self.frame
        return SubspacePoint(self.field, K @ I[:, :k]), SubspacePoint(self.field, K @ I[:, k:])

    def qperp_block(self, C):
        k = self.n * self.field.block
        y = np.zeros((2 * k, 2 * k), dtype=complex if self.field is not Field.R else float)
        y[k:, :k] = C
        return self.frame @ y @ self._frame_inv

    def sample_qperp(self, rng, degenerate=False):
        n, F, f = self.n, self.field, self.form
        eps = f.eps
        if degenerate:
            r = int(rng.integers(0, n))
            A = random_matrix(rng, n, n, F)
            b = F.block
            D = np.zeros_like(A)
            D[: r * b, : r * b] = A[: r * b, : r * b] - eps * f.star(A[: r * b, : r * b])
            W = random_matrix(rng, n, n, F)
            C = W @ D @ f.star(W)
        else:
            A = random_matrix(rng, n, n, F)
            C = A - eps * f.star(A)
        return self.qperp_block(C)

    def random_group(self, rng, scale=0.4):
        g = super().random_group(rng, scale)
        return g.real if self.field is Field.R else g

    def circle_through(self, p, p1, q):
        return circle_through_iso(p, p1, q, self.form, self.tol)[1]

    def geodesic_through(self, p, p1, q):
        T, _ = circle_through_iso(p, p1, q, self.form, self.tol)
        return geodesic_iso(T, self.form, self.tol)

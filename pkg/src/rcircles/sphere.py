"""The conformal sphere S^n with the Moebius group O_0(1, n+1).

Points are unit vectors of R^{n+1}.  A point p corresponds to the null line
through (1, p) in Minkowski space R^{1,n+1} with Gram diag(-1, I).
"""

from __future__ import annotations

import math

import numpy as np

from .lie import AlgebraBasis, so_lorentz
from .models import CircleCurve, GeodesicCurve, LieModel
from .scalars import DEFAULT_TOL, DomainError, InconsistencyError, PreconditionError, Tolerance


class _Infinity:
    """The point at infinity of a stereographic chart."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "INFINITY"


INFINITY = _Infinity()


def _unit(p, tol: Tolerance) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if p.ndim != 1 or abs(np.linalg.norm(p) - 1.0) > tol.eq_abs:
        raise DomainError("sphere points are unit vectors")
    return p


def stereo(q, p, tol: Tolerance = DEFAULT_TOL):
    """Stereographic projection from the pole q onto the hyperplane q-perp."""
    q, p = _unit(q, tol), _unit(p, tol)
    if np.linalg.norm(p - q) <= tol.eq_abs:
        return INFINITY
    pq = p @ q
    return (p - pq * q) / (1.0 - pq)


def stereo_inv(q, x):
    q = np.asarray(q, dtype=float)
    if x is INFINITY:
        return q
    x = np.asarray(x, dtype=float)
    r2 = x @ x
    return (2.0 * x + (r2 - 1.0) * q) / (r2 + 1.0)


def lorentz_gram(n: int) -> np.ndarray:
    return np.diag([-1.0] + [1.0] * (n + 1))


def null_lift(p) -> np.ndarray:
    return np.concatenate([[1.0], np.asarray(p, dtype=float)])


def check_lorentz(g, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    g = np.asarray(g)
    if np.iscomplexobj(g):
        if np.abs(g.imag).max() > tol.eq_abs:
            raise DomainError("Moebius matrices are real")
        g = g.real
    G = lorentz_gram(g.shape[0] - 2)
    scale = max(1.0, np.linalg.norm(g) ** 2)
    if np.abs(g.T @ G @ g - G).max() > tol.eq_abs * scale:
        raise DomainError("matrix does not preserve the Lorentz form")
    if g[0, 0] <= 0 or np.linalg.det(g) <= 0:
        raise DomainError("matrix is not in the identity component")
    return g


def mobius_act(g, p, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    g = check_lorentz(g, tol)
    v = g @ null_lift(p)
    return v[1:] / v[0]


def circle_through_sphere(p, p1, q, tol: Tolerance = DEFAULT_TOL) -> CircleCurve:
    p, p1, q = (_unit(x, tol) for x in (p, p1, q))
    for a, b, name in ((p, p1, "p, p1"), (p, q, "p, q"), (p1, q, "p1, q")):
        if np.linalg.norm(a - b) <= tol.eq_abs:
            raise PreconditionError(f"points {name} coincide")
    x0, x1 = stereo(q, p, tol), stereo(q, p1, tol)
    return CircleCurve("sphere", p, p1, q, lambda t: stereo_inv(q, (1.0 - t) * x0 + t * x1))


def lorentz_frame_map(p, p1, q, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """h in SO_0(1, n+1) with h.e1 = p, h.e2 = p1 and h.(-e1) = q."""
    p, p1, q = (np.asarray(x, dtype=float) for x in (p, p1, q))
    m = p.shape[0]
    if m < 3:
        raise DomainError("needs n >= 2")
    G = lorentz_gram(m - 1)
    e = np.eye(m)
    src = [null_lift(e[0]), null_lift(e[1]), null_lift(-e[0])]
    dst = [null_lift(p), null_lift(p1), null_lift(q)]
    A = dst[0] @ G @ dst[1]
    B = dst[0] @ G @ dst[2]
    C = dst[1] @ G @ dst[2]
    if max(A, B, C) >= -tol.eq_abs:
        raise PreconditionError("points must be pairwise distinct")
    # match the pairings -1, -2, -1 of the standard triple
    l1 = math.sqrt(-2.0 * C / (A * B))
    l2 = -1.0 / (A * l1)
    l3 = -2.0 / (B * l1)
    dst = [l1 * dst[0], l2 * dst[1], l3 * dst[2]]
    # Lorentz-orthonormal basis of the complement of span(dst)
    D = np.stack(dst, axis=1)
    _, s, vh = np.linalg.svd(D.T @ G)
    comp = vh[3:].T
    if comp.shape[1]:
        gram = comp.T @ G @ comp
        L = np.linalg.cholesky(gram)
        comp = comp @ np.linalg.inv(L).T
    S = np.column_stack(src + [np.eye(m + 1)[:, k] for k in range(3, m + 1)])
    T = np.column_stack(dst + [comp[:, k] for k in range(comp.shape[1])])
    h = T @ np.linalg.inv(S)
    if np.linalg.det(h) < 0:
        T[:, -1] *= -1
        h = T @ np.linalg.inv(S)
    return check_lorentz(h, Tolerance(tol.rank_rel, max(tol.eq_abs, 1e-6)))


def geodesic_sphere(p, p1, q, tol: Tolerance = DEFAULT_TOL) -> GeodesicCurve:
    """Great-circle geodesic of the round metric transported so that it matches the circle."""
    h = lorentz_frame_map(p, p1, q, tol)
    m = len(p)
    e = np.eye(m)

    def gamma(s):
        x = math.cos(2 * math.pi * s) * e[0] + math.sin(2 * math.pi * s) * e[1]
        v = h @ null_lift(x)
        return v[1:] / v[0]

    return GeodesicCurve("sphere", gamma)


def translation_generator(q, w) -> np.ndarray:
    """y_w x = <w, x> l_q - <l_q, x> w, an element of the polar of the stabilizer of q."""
    q = np.asarray(q, dtype=float)
    G = lorentz_gram(len(q) - 1)
    lq = null_lift(q)
    wv = np.concatenate([[0.0], np.asarray(w, dtype=float)])
    return np.outer(lq, G @ wv) - np.outer(wv, G @ lq)


class SphereModel(LieModel):
    def __init__(self, n: int, tol: Tolerance = DEFAULT_TOL):
        super().__init__(tol)
        if n < 2:
            raise DomainError("sphere dimension must be at least 2")
        self.n = n
        self.name = "sphere"

    @property
    def algebra(self) -> AlgebraBasis:
        return so_lorentz(self.n, self.tol)

    def line(self, point):
        return null_lift(point).reshape(-1, 1)

    def act(self, g, point):
        return mobius_act(np.real_if_close(g), point, Tolerance(self.tol.rank_rel, max(self.tol.eq_abs, 1e-7)))

    def distance(self, a, b) -> float:
        return float(np.linalg.norm(np.asarray(a) - np.asarray(b)))

    def is_opposite(self, a, b) -> bool:
        return self.distance(a, b) > self.tol.eq_abs

    def standard_pair(self):
        e = np.eye(self.n + 1)
        return -e[-1], e[-1]

    def sample_qperp(self, rng, degenerate=False):
        w = np.zeros(self.n + 1)
        if not degenerate:
            w[:-1] = rng.standard_normal(self.n)
        return translation_generator(self.standard_pair()[1], w)

    def random_group(self, rng, scale=0.4):
        return super().random_group(rng, scale).real

    def random_point(self, rng):
        v = rng.standard_normal(self.n + 1)
        return v / np.linalg.norm(v)

    def random_triple(self, rng):
        return tuple(self.random_point(rng) for _ in range(3))

    def circle_through(self, p, p1, q):
        return circle_through_sphere(p, p1, q, self.tol)

    def geodesic_through(self, p, p1, q):
        return geodesic_sphere(p, p1, q, self.tol)

    def check_circle(self, circle: CircleCurve, samples: int = 50):
        """Planarity residual and plane distance to the origin of sampled points."""
        ts = np.tan(np.pi * (np.arange(samples) + 0.5) / samples - np.pi / 2)
        pts = np.array([circle(t) for t in ts])
        c = pts.mean(axis=0)
        _, s, vh = np.linalg.svd(pts - c)
        resid = float(s[2]) if len(s) > 2 else 0.0
        normal_space = vh[2:]
        dist = float(np.linalg.norm(normal_space @ c))
        if dist >= 1.0:
            raise InconsistencyError("circle plane misses the ball")
        return resid, dist

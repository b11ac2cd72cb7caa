"""Common scaffolding for the concrete matrix models: curves and the model base class."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Callable

import numpy as np
import scipy.linalg

from .lie import AlgebraBasis, SubalgebraRep, exp_nilpotent, is_inf, stabilizer
from .scalars import DEFAULT_TOL, Tolerance


@dataclass(frozen=True)
class CircleCurve:
    """c : R u {inf} -> M with c(0), c(1), c(inf) the defining points."""

    model: str
    p: Any
    p1: Any
    q: Any
    fn: Callable[[float], Any]

    def __call__(self, t):
        if is_inf(t):
            return self.q
        return self.fn(float(t))


@dataclass(frozen=True)
class GeodesicCurve:
    """Closed curve with period 1 in its parameter."""

    model: str
    fn: Callable[[float], Any]

    def __call__(self, s):
        return self.fn(float(s))


def comparison_grid(samples: int = 50) -> np.ndarray:
    """Midpoints of a uniform partition of (-1/2, 1/2); never hits s = 1/2."""
    return -0.5 + (np.arange(samples) + 0.5) / samples


def circle_geodesic_gap(circle: CircleCurve, geodesic: GeodesicCurve, distance, samples: int = 50) -> float:
    """max_s d(geodesic(s), circle(tan(pi s))) plus the s = 1/2 versus t = inf check."""
    gap = 0.0
    for s in comparison_grid(samples):
        gap = max(gap, distance(geodesic(s), circle(math.tan(math.pi * s))))
    return max(gap, distance(geodesic(0.5), circle(math.inf)))


class LieModel:
    """A self-dual symmetric R-space realized as an orbit of subspaces or lines.

    Subclasses supply the algebra, how a point becomes a subspace (``line``),
    the group action, a distance and the standard opposite pair.
    """

    name: str = "model"

    def __init__(self, tol: Tolerance = DEFAULT_TOL):
        self.tol = tol

    # -- to be supplied -----------------------------------------------------
    @property
    def algebra(self) -> AlgebraBasis:
        raise NotImplementedError

    def line(self, point) -> np.ndarray:
        raise NotImplementedError

    def act(self, g, point):
        raise NotImplementedError

    def distance(self, a, b) -> float:
        raise NotImplementedError

    def is_opposite(self, a, b) -> bool:
        raise NotImplementedError

    def standard_pair(self):
        raise NotImplementedError

    def sample_qperp(self, rng: np.random.Generator, degenerate: bool = False) -> np.ndarray:
        raise NotImplementedError

    def circle_through(self, p, p1, q) -> CircleCurve:
        raise NotImplementedError

    def geodesic_through(self, p, p1, q) -> GeodesicCurve:
        raise NotImplementedError

    # -- generic --------------------------------------------------------------
    def stabilizer(self, point) -> SubalgebraRep:
        return stabilizer(self.algebra, self.line(point), self.tol)

    def random_group(self, rng: np.random.Generator, scale: float = 0.4) -> np.ndarray:
        return scipy.linalg.expm(self.algebra.random_element(rng, scale / math.sqrt(self.algebra.dim) * 3))

    def conjugate(self, g, y) -> np.ndarray:
        return g @ y @ np.linalg.inv(g)

    def random_setup(self, rng: np.random.Generator, degenerate: bool = False):
        """(p, q, y, g) with y in the polar of q's stabilizer, in general position."""
        p0, q0 = self.standard_pair()
        y0 = self.sample_qperp(rng, degenerate)
        g = self.random_group(rng)
        return self.act(g, p0), self.act(g, q0), self.conjugate(g, y0), g

    def random_triple(self, rng: np.random.Generator):
        p, q, y, _ = self.random_setup(rng)
        return p, self.act(exp_nilpotent(y, self.tol), p), q

    def lie_circle(self, y, p, q) -> CircleCurve:
        """t -> exp(t y).p, built straight from the Lie-algebraic definition."""
        y = np.asarray(y)
        return CircleCurve(self.name, p, self.act(exp_nilpotent(y, self.tol), p), q,
                           lambda t: self.act(exp_nilpotent(t * y, self.tol), p))

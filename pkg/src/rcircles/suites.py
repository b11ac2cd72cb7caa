"""Seeded verification suites over every model family.

Each trial draws from ``np.random.default_rng([seed, trial])`` so results do not
depend on trial order.  Suites return a ``SuiteReport``; the CLI ``check``
command and the acceptance tests both drive them.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .classical import ClassicalModel
from .grassmann import ConnectingIso, GrassmannModel
from .isotropic import EVEN_ONLY, FAMILIES, IsotropicModel, circle_through_iso, graph_curve, tskew_residual
from .lie import exp_nilpotent, is_opposite, is_prevalent, prevalent_iso_check
from .models import circle_geodesic_gap
from .quadric import (
    OrientedPlane,
    QuadricModel,
    angles_from_ab,
    bil,
    c_simple,
    characteristic_angles,
    circle_data,
    circle_standard,
    conjugating_element,
    act_plane,
    exp_z_closed_form_B,
    opposite_margins,
    plane_distance,
    psi_vector,
    to_B,
    z_generator,
)
from .scalars import DEFAULT_TOL, InconsistencyError, Tolerance
from .sphere import SphereModel


@dataclass
class SuiteReport:
    name: str
    trials: int = 0
    failures: int = 0
    max_residual: float = 0.0
    seconds: float = 0.0
    families: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)
    results: list = field(default_factory=list)
    inconsistencies: int = 0

    @property
    def passed(self) -> bool:
        return self.trials > 0 and self.failures == 0

    def record(self, family: str, ok: bool, residual: float = 0.0):
        self.trials += 1
        self.failures += 0 if ok else 1
        if np.isfinite(residual):
            self.max_residual = max(self.max_residual, float(residual))
        fam = self.families.setdefault(family, {"trials": 0, "failures": 0, "max_residual": 0.0})
        fam["trials"] += 1
        fam["failures"] += 0 if ok else 1
        if np.isfinite(residual):
            fam["max_residual"] = max(fam["max_residual"], float(residual))
        self.results.append({"family": family, "trial": fam["trials"] - 1, "passed": bool(ok),
                             "residual": float(residual) if np.isfinite(residual) else "inf"})

    def to_dict(self) -> dict:
        return {"suite": self.name, "passed": self.passed, "trials": self.trials, "failures": self.failures,
                "max_residual": self.max_residual, "families": self.families, "results": self.results,
                "notes": self.notes}


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.default_rng([seed, trial])


# -- family registries -------------------------------------------------------------

def build_model(model_id: str, tol: Tolerance = DEFAULT_TOL):
    """Model from a model id such as 'sphere:3', 'grassmann:H:2', 'isotropic:c_hermitian:3',
    'classical:U:2' or 'quadric:5'."""
    parts = model_id.split(":")
    kind = parts[0]
    if kind == "sphere":
        return SphereModel(int(parts[1]) if len(parts) > 1 else 2, tol)
    if kind == "grassmann":
        F = parts[1] if len(parts) > 1 else "R"
        return GrassmannModel(int(parts[2]) if len(parts) > 2 else 2, F, tol)
    if kind == "isotropic":
        fam = parts[1] if len(parts) > 1 else "r_symplectic"
        return IsotropicModel(fam, int(parts[2]) if len(parts) > 2 else 2, tol)
    if kind == "classical":
        grp = parts[1] if len(parts) > 1 else "U"
        return ClassicalModel(grp, int(parts[2]) if len(parts) > 2 else 2, tol)
    if kind == "quadric":
        return QuadricModel(int(parts[1]) if len(parts) > 1 else 4, tol)
    raise ValueError(f"unknown model {model_id!r}")


def circle_families() -> list[str]:
    fams = [f"sphere:{n}" for n in (2, 3, 4)]
    fams += [f"grassmann:{F}:{n}" for F in "RCH" for n in (2, 3)]
    for fam in FAMILIES:
        ns = (2, 4) if fam in EVEN_ONLY else (2, 3, 4)
        fams += [f"isotropic:{fam}:{n}" for n in ns]
    fams += [f"quadric:{N}" for N in (4, 5, 6, 7)]
    return fams


def prevalence_families() -> list[str]:
    """One representative size per model family, small enough for dense rank tests."""
    fams = ["sphere:3"] + [f"grassmann:{F}:2" for F in "RCH"]
    fams += [f"isotropic:{fam}:2" for fam in FAMILIES]
    fams += ["quadric:5"]
    return fams


def equivariance_families() -> list[str]:
    return ["sphere:3", "grassmann:R:2", "grassmann:C:2", "grassmann:H:2"] + \
        [f"isotropic:{fam}:2" for fam in FAMILIES] + ["classical:U:2", "quadric:5"]


SAMPLED_T = (1.0, -1.0, 0.5, -0.5, 2.0)


# -- suites -----------------------------------------------------------------------

def prevalence_trial(model, rng, tol: Tolerance):
    degenerate = bool(rng.random() < 0.3)
    P, Q, y, _ = model.random_setup(rng, degenerate)
    sp, sq = model.stabilizer(P), model.stabilizer(Q)
    a = is_prevalent(y, sq, tol=tol)
    b = prevalent_iso_check(y, sp, sq, tol=tol)
    c = True
    for t in SAMPLED_T:
        Pt = model.act(exp_nilpotent(t * y, tol), P)
        if not (model.is_opposite(Pt, P) and model.is_opposite(Pt, Q)):
            c = False
            break
    return degenerate, a, b, c


def prevalence_suite(trials: int = 100, seed: int = 0, tol: Tolerance = DEFAULT_TOL, families=None) -> SuiteReport:
    rep = SuiteReport("prevalence-equiv")
    t0 = time.perf_counter()
    for model_id in families or prevalence_families():
        model = build_model(model_id, tol)
        for k in range(trials):
            try:
                degenerate, a, b, c = prevalence_trial(model, trial_rng(seed, k), tol)
                ok = a == b == c == (not degenerate)
            except (ValueError, ArithmeticError, np.linalg.LinAlgError):
                ok = False
            rep.record(model_id, ok)
    rep.seconds = time.perf_counter() - t0
    return rep


def circle_geodesic_suite(trials: int = 20, seed: int = 0, tol: Tolerance = DEFAULT_TOL, families=None,
                          samples: int = 50) -> SuiteReport:
    rep = SuiteReport("circle-geodesic")
    t0 = time.perf_counter()
    for model_id in families or circle_families():
        model = build_model(model_id, tol)
        for k in range(trials):
            try:
                rng = trial_rng(seed, k)
                p, p1, q = model.random_triple(rng)
                c = model.circle_through(p, p1, q)
                g = model.geodesic_through(p, p1, q)
                gap = circle_geodesic_gap(c, g, model.distance, samples)
                ok = gap < tol.eq_abs
                if isinstance(model, SphereModel):
                    resid, dist = model.check_circle(c, samples)
                    ok = ok and resid < tol.eq_abs and dist < 1 - tol.eq_abs
            except (ValueError, ArithmeticError, np.linalg.LinAlgError):
                ok, gap = False, math.inf
            rep.record(model_id, ok, gap)
    rep.seconds = time.perf_counter() - t0
    return rep


def equivariance_suite(trials: int = 20, seed: int = 0, tol: Tolerance = DEFAULT_TOL, families=None,
                       params: int = 20) -> SuiteReport:
    rep = SuiteReport("equivariance")
    t0 = time.perf_counter()
    ts = list(np.linspace(-3, 3, params - 1)) + [math.inf]
    for model_id in families or equivariance_families():
        model = build_model(model_id, tol)
        for k in range(trials):
            try:
                rng = trial_rng(seed, k)
                p, p1, q = model.random_triple(rng)
                g = model.random_group(rng)
                c = model.circle_through(p, p1, q)
                c2 = model.circle_through(model.act(g, p), model.act(g, p1), model.act(g, q))
                gap = max(model.distance(model.act(g, c(t)), c2(t)) for t in ts)
                ok = gap < tol.eq_abs
            except (ValueError, ArithmeticError, np.linalg.LinAlgError):
                ok, gap = False, math.inf
            rep.record(model_id, ok, gap)
    rep.seconds = time.perf_counter() - t0
    return rep


def span_isotropy(f, basis) -> float:
    Q, _ = np.linalg.qr(basis)
    return float(np.abs(f.pair(Q, Q)).max())


ISOTROPY_T = [float(x) for x in np.concatenate([-np.logspace(-2, 2, 10), np.logspace(-2, 2, 10)])]


def isotropy_suite(trials: int = 20, seed: int = 0, tol: Tolerance = DEFAULT_TOL, families=None) -> SuiteReport:
    """f-skew T keeps c(t) isotropic; T + 0.5 E with E not f-skew breaks isotropy."""
    rep = SuiteReport("isotropy")
    t0 = time.perf_counter()
    iso_tol = min(1e-9, tol.eq_abs)
    model_ids = families or [s for s in circle_families() if s.startswith("isotropic")]
    for model_id in model_ids:
        model = build_model(model_id, tol)
        f = model.form
        for k in range(trials):
            try:
                rng = trial_rng(seed, k)
                p, p1, q = model.random_triple(rng)
                T, c = circle_through_iso(p, p1, q, f, tol)
                good = max(span_isotropy(f, c(t).basis) for t in ISOTROPY_T)
                Tb = ConnectingIso(T.P, T.Q, T.matrix + 0.5 * non_skew_perturbation(rng, T, f))
                bad = max(span_isotropy(f, graph_curve(Tb)(t).basis) for t in ISOTROPY_T)
                ok = (good < iso_tol and tskew_residual(T, f) < tol.eq_abs
                      and bad > 1e-3 and tskew_residual(Tb, f) > tol.eq_abs)
            except (ValueError, ArithmeticError, np.linalg.LinAlgError):
                ok, good = False, math.inf
            rep.record(model_id, ok, good)
    rep.seconds = time.perf_counter() - t0
    return rep


def non_skew_perturbation(rng, T: ConnectingIso, f) -> np.ndarray:
    """E in the coordinates of T's matrix whose f-skew defect, in orthonormal bases, has unit size."""
    from .scalars import random_matrix
    Qu, Ru = np.linalg.qr(T.P.basis)
    Qw, Rw = np.linalg.qr(T.Q.basis)
    for _ in range(10):
        E = random_matrix(rng, f.n, f.n, f.field)
        D = Qw @ E
        R = np.abs(f.pair(D, Qu) + f.pair(Qu, D)).max()
        if R > 1e-2:
            return np.linalg.solve(Rw, E / R) @ Ru
    raise InconsistencyError("could not draw a non-skew perturbation")


def random_opposite_pair(rng, N: int, kind: str):
    """(P, Q) of one of the kinds random, equal-angles, identical, reversed."""
    A = np.linalg.qr(rng.standard_normal((N, 4)))[0]
    u1, v1, u2, v2 = A.T
    P = OrientedPlane(np.column_stack([u1, u2]))
    if kind == "random":
        B = np.linalg.qr(rng.standard_normal((N, 2)))[0]
        return P, OrientedPlane(B)
    if kind == "equal":
        al = rng.uniform(0, math.pi / 2)
        return P, OrientedPlane(np.column_stack([math.cos(al) * u1 + math.sin(al) * v1,
                                                 math.cos(al) * u2 + math.sin(al) * v2]))
    if kind == "identical":
        th = rng.uniform(0, 2 * math.pi)
        R = np.array([[math.cos(th), -math.sin(th)], [math.sin(th), math.cos(th)]])
        return P, OrientedPlane(P.frame @ R)
    if kind == "reversed":
        return P, OrientedPlane(P.frame[:, ::-1])
    raise ValueError(kind)


OPPOSITE_KINDS = ("random", "equal", "identical", "reversed")


def opposite_suite(trials: int = 100, seed: int = 0, tol: Tolerance = DEFAULT_TOL, dims=(4, 5, 6, 7)) -> SuiteReport:
    """Polar-intersection, bilinear-form and characteristic-angle opposite tests agree."""
    rep = SuiteReport("opposite-equiv")
    t0 = time.perf_counter()
    models = {N: QuadricModel(N, tol) for N in dims}
    inconsistencies = 0
    for k in range(trials):
        rng = trial_rng(seed, k)
        N = dims[k % len(dims)]
        kind = OPPOSITE_KINDS[(k // len(dims)) % len(OPPOSITE_KINDS)]
        P, Q = random_opposite_pair(rng, N, kind)
        m = models[N]
        xy, gap = opposite_margins(P, Q)
        try:
            lie = is_opposite(m.stabilizer(P), m.stabilizer(Q), tol=tol)
            form = xy > tol.eq_abs
            ang = gap > tol.eq_abs
            m.is_opposite(P, Q)
            in_band = tol.eq_abs <= xy <= 10 * tol.eq_abs
            ok = in_band or lie == form == ang
            expected = {"random": True, "equal": False, "identical": False, "reversed": True}[kind]
            ok = ok and (in_band or form == expected)
            resid = abs(xy - abs(gap))
            ok = ok and resid < tol.eq_abs
        except InconsistencyError:
            inconsistencies += 1
            ok, resid = False, math.inf
        rep.record(f"quadric:{N}:{kind}", ok, resid)
    rep.inconsistencies = inconsistencies
    rep.notes.append(f"inconsistency errors: {inconsistencies}")
    rep.seconds = time.perf_counter() - t0
    return rep


def _guarded(rep: SuiteReport, family: str, check):
    try:
        ok, r = check()
    except (ValueError, ArithmeticError, np.linalg.LinAlgError):
        ok, r = False, math.inf
    rep.record(family, ok, r)


def abc_identity_residual(alpha: float, beta: float) -> float:
    d = circle_data(alpha, beta)
    return abs(d.C - (d.b ** 2 - d.a ** 2))


def sample_circle_angles(rng, min_denominator: float = 0.1):
    """0 <= alpha < beta, alpha + beta < pi with cos alpha + cos beta >= min_denominator.

    a, b and C carry 1 / (cos alpha + cos beta); bounding it keeps them below 1 / min_denominator.
    """
    while True:
        al = float(rng.uniform(0, math.pi / 2))
        be = float(rng.uniform(al, math.pi - al))
        if be > al and math.cos(al) + math.cos(be) >= min_denominator:
            return al, be


def exp_block_residual(z, t: float, tol: Tolerance = DEFAULT_TOL) -> float:
    E = to_B(exp_nilpotent(t * z_generator(z), tol))
    return float(np.abs(E - exp_z_closed_form_B(z, t)).max())


def form_angle_residual(P, Q) -> float:
    ang = characteristic_angles(P, Q)
    return abs(abs(bil(psi_vector(P), psi_vector(Q))) - abs(math.cos(ang.alpha) - math.cos(ang.beta)))


CONJUGATION_T = list(np.linspace(-4, 4, 19)) + [math.inf]


def conjugation_residuals(a: float, b: float, N: int, tol: Tolerance = DEFAULT_TOL):
    """(|O^t O - I|, max_t d(c(t), O c0(t))) over 20 parameters including infinity."""
    O = conjugating_element(a, b, N=N, tol=tol)
    r_form = float(np.abs(O.T @ O - np.eye(N)).max())
    alpha, beta = angles_from_ab(a, b)
    c = circle_standard(circle_data(alpha, beta, np.eye(N)[:, :4], tol))
    c0 = c_simple(N)
    r_curve = max(plane_distance(c(t), act_plane(O, c0(t), tol)) for t in CONJUGATION_T)
    return r_form, r_curve


def quadric_formula_suite(trials: int = 100, seed: int = 0, tol: Tolerance = DEFAULT_TOL) -> SuiteReport:
    """Circle-data identity, the simple circle, exp(tZ) block form, |<X,Y>| identity and O."""
    rep = SuiteReport("quadric-formulas")
    t0 = time.perf_counter()
    tight = min(1e-12, tol.eq_abs)
    mid = min(1e-9, tol.eq_abs)

    def simple():
        cs, c0 = circle_standard(circle_data(0.0, math.pi / 2)), c_simple(4)
        gap = max(plane_distance(cs(t), c0(t)) for t in list(np.linspace(-5, 5, 41)) + [math.inf])
        return gap <= tight, gap

    _guarded(rep, "c-simple", simple)
    for k in range(trials):
        rng = trial_rng(seed, k)
        al, be = sample_circle_angles(rng)
        N = int(rng.integers(4, 8))
        z = rng.standard_normal(N - 2) + 1j * rng.standard_normal(N - 2)
        t = float(rng.uniform(-3, 3))
        pairs = [random_opposite_pair(rng, N, kind) for kind in ("random", "equal")]
        a = float(rng.uniform(0, 2))
        b = a + float(rng.uniform(0.05, 2))

        def abc():
            r = abc_identity_residual(al, be)
            return r < tight, r

        def block():
            r = exp_block_residual(z, t, tol)
            return r < tight, r

        def conj():
            r_form, r_curve = conjugation_residuals(a, b, N, tol)
            return r_form < min(1e-10, tol.eq_abs) and r_curve < tol.eq_abs, max(r_form, r_curve)

        _guarded(rep, "abc-identity", abc)
        _guarded(rep, "exp-block-form", block)
        for P, Q in pairs:
            _guarded(rep, "form-vs-angles", lambda: (lambda r: (r < mid, r))(form_angle_residual(P, Q)))
        _guarded(rep, "conjugating-element", conj)
    rep.seconds = time.perf_counter() - t0
    return rep


SUITES = {
    "prevalence-equiv": prevalence_suite,
    "circle-geodesic": circle_geodesic_suite,
    "opposite-equiv": opposite_suite,
    "equivariance": equivariance_suite,
    "isotropy": isotropy_suite,
    "quadric-formulas": quadric_formula_suite,
}


def run_suite(name: str, trials: int, seed: int, tol: Tolerance = DEFAULT_TOL) -> SuiteReport:
    if name not in SUITES:
        raise KeyError(name)
    return SUITES[name](trials=trials, seed=seed, tol=tol)

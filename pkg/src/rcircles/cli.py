"""Command-line front end.

    rcircles circle    --model quadric:4 --samples 8
    rcircles geodesic  --model grassmann:C:2 --points @triple.json
    rcircles check     circle-geodesic --trials 20 --seed 1
    rcircles angles    --points '[{"u": [1,0,0,0], "v": [0,1,0,0]}, {"u": [0,1,0,0], "v": [1,0,0,0]}]'
    rcircles prevalent --model isotropic:c_hermitian:2 --seed 3

Exit codes: 0 success, 1 suite reported failures, 2 usage or parse error,
3 mathematical precondition failure, 4 internal inconsistency.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import serialize as ser
from .lie import exp_nilpotent, is_prevalent, prevalent_iso_check
from .models import circle_geodesic_gap, comparison_grid
from .quadric import characteristic_angles, opposite_margins
from .scalars import DomainError, InconsistencyError, PreconditionError, Tolerance
from .suites import SAMPLED_T, SUITES, build_model, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_PRECONDITION, EXIT_INCONSISTENT = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    model: str = "sphere:2"
    points: str | None = None
    samples: int = 16
    seed: int = 0
    tol: Tolerance = Tolerance()
    fmt: str = "json"
    out: str | None = None
    suite: str | None = None
    trials: int = 20

    def __post_init__(self):
        if self.samples < 2:
            raise UsageError("--samples must be at least 2")
        if self.trials < 1:
            raise UsageError("--trials must be positive")
        if self.fmt not in ("json", "csv"):
            raise UsageError("--format is json or csv")


def circle_params(samples: int) -> list:
    """tan(pi s) on s_k = 2k/(2N+1) wrapped into (-1/2, 1/2), then infinity.

    s_0 = 0 gives the first defining point; the odd denominator keeps every s away from 1/2.
    """
    N = samples
    s = (2 * np.arange(N)) / (2 * N + 1)
    s = np.where(s >= 0.5, s - 1.0, s)
    return [float(math.tan(math.pi * x)) for x in s] + [math.inf]


def load_points(source: str | None):
    if source is None:
        return None
    text = Path(source[1:]).read_text(encoding="utf-8") if source.startswith("@") else source
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"--points is not valid JSON: {exc}") from None


def _model(cfg: RunConfig):
    try:
        return build_model(cfg.model, cfg.tol)
    except (ValueError, IndexError, KeyError) as exc:
        raise UsageError(f"bad --model {cfg.model!r}: {exc}") from None


def _triple(cfg: RunConfig, model):
    raw = load_points(cfg.points)
    if raw is None:
        return model.random_triple(np.random.default_rng(cfg.seed))
    if isinstance(raw, dict) and "points" in raw:
        raw = raw["points"]
    if not isinstance(raw, list) or len(raw) != 3:
        raise UsageError("--points must hold three points [p, p1, q]")
    try:
        return tuple(ser.decode_point(model, r, cfg.tol) for r in raw)
    except DomainError as exc:
        raise UsageError(str(exc)) from None


def cmd_circle(cfg: RunConfig) -> dict:
    model = _model(cfg)
    pts = _triple(cfg, model)
    c = model.circle_through(*pts)
    return {
        "model": cfg.model,
        "defining_points": [ser.encode_point(model, p) for p in pts],
        "samples": [{"t": ser.encode_param(t), "point": ser.encode_point(model, c(t))}
                    for t in circle_params(cfg.samples)],
    }


def cmd_geodesic(cfg: RunConfig) -> dict:
    model = _model(cfg)
    pts = _triple(cfg, model)
    c, g = model.circle_through(*pts), model.geodesic_through(*pts)
    return {
        "model": cfg.model,
        "defining_points": [ser.encode_point(model, p) for p in pts],
        "samples": [{"s": float(s), "point": ser.encode_point(model, g(s))} for s in comparison_grid(cfg.samples)],
        "max_gap": circle_geodesic_gap(c, g, model.distance, cfg.samples),
    }


def cmd_check(cfg: RunConfig) -> dict:
    if cfg.suite not in SUITES:
        raise UsageError(f"unknown suite {cfg.suite!r}; choose from {', '.join(SUITES)}")
    rep = run_suite(cfg.suite, cfg.trials, cfg.seed, cfg.tol)
    d = rep.to_dict()
    d["seed"] = cfg.seed
    d["tolerance"] = {"rank_rel": cfg.tol.rank_rel, "eq_abs": cfg.tol.eq_abs}
    return d


def cmd_angles(cfg: RunConfig) -> dict:
    raw = load_points(cfg.points)
    if raw is None:
        from .quadric import QuadricModel
        N = int(cfg.model.split(":")[1]) if cfg.model.startswith("quadric:") else 4
        m = QuadricModel(N, cfg.tol)
        rng = np.random.default_rng(cfg.seed)
        P, Q = m.random_plane(rng), m.random_plane(rng)
    else:
        if not isinstance(raw, list) or len(raw) != 2:
            raise UsageError("--points must hold two planes")
        try:
            P, Q = (ser.decode_plane(r, cfg.tol) for r in raw)
        except (DomainError, TypeError, ValueError) as exc:
            raise UsageError(f"malformed frame: {exc}") from None
        if P.N != Q.N:
            raise UsageError("planes live in different dimensions")
    ang = characteristic_angles(P, Q)
    xy, gap = opposite_margins(P, Q)
    return {
        "planes": [{"u": [ser._num(x) for x in X.u], "v": [ser._num(x) for x in X.v]} for X in (P, Q)],
        "alpha": float(ang.alpha),
        "beta": float(ang.beta),
        "opposite": bool(gap > cfg.tol.eq_abs),
        "form_margin": float(xy),
        "angle_margin": float(gap),
    }


def cmd_prevalent(cfg: RunConfig) -> dict:
    model = _model(cfg)
    raw = load_points(cfg.points)
    if raw is None:
        rng = np.random.default_rng(cfg.seed)
        P, Q, y, _ = model.random_setup(rng, bool(rng.random() < 0.3))
    else:
        if not isinstance(raw, dict) or set(raw) != {"p", "q", "y"}:
            raise UsageError("--points must be {'p': ..., 'q': ..., 'y': ...}")
        try:
            P = ser.decode_point(model, raw["p"], cfg.tol)
            Q = ser.decode_point(model, raw["q"], cfg.tol)
            y = ser.decode_algebra_element(model, raw["y"], cfg.tol)
        except DomainError as exc:
            raise UsageError(str(exc)) from None
        if not model.is_opposite(P, Q):
            raise PreconditionError("points p, q are not opposite")
    sp, sq = model.stabilizer(P), model.stabilizer(Q)
    a = is_prevalent(y, sq, tol=cfg.tol)
    b = prevalent_iso_check(y, sp, sq, tol=cfg.tol)
    c = all(model.is_opposite(Pt, P) and model.is_opposite(Pt, Q)
            for Pt in (model.act(exp_nilpotent(t * y, cfg.tol), P) for t in SAMPLED_T))
    return {
        "model": cfg.model,
        "p": ser.encode_point(model, P),
        "q": ser.encode_point(model, Q),
        "y": ser.encode_algebra_element(model, y),
        "is_prevalent": bool(a),
        "iso_check": bool(b),
        "sampled_opposite": bool(c),
        "agree": bool(a == b == c),
    }


COMMANDS = {"circle": cmd_circle, "geodesic": cmd_geodesic, "check": cmd_check,
            "angles": cmd_angles, "prevalent": cmd_prevalent}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--model", default="sphere:2",
                        help="sphere:n | grassmann:F:n | isotropic:family:n | classical:G:n | quadric:N")
    common.add_argument("--points", help="inline JSON or @file; random from --seed when omitted")
    common.add_argument("--samples", type=int, default=16)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--tol-rank", type=float, default=1e-10)
    common.add_argument("--tol-eq", type=float, default=1e-8)
    common.add_argument("--format", dest="fmt", choices=("json", "csv"), default="json")
    common.add_argument("--out", help="output file (stdout when omitted)")

    ap = argparse.ArgumentParser(prog="rcircles", description="Circles in self-dual symmetric R-spaces.")
    sub = ap.add_subparsers(dest="command", required=True)
    sub.add_parser("circle", parents=[common], help="sample the circle through three points")
    sub.add_parser("geodesic", parents=[common], help="sample the matching diametrical geodesic")
    chk = sub.add_parser("check", parents=[common], help="run a verification suite")
    chk.add_argument("suite", help=", ".join(SUITES))
    chk.add_argument("--trials", type=int, default=20)
    sub.add_parser("angles", parents=[common], help="characteristic angles of two oriented planes")
    sub.add_parser("prevalent", parents=[common], help="prevalence tests for y in q-perp")
    return ap


def config_from_args(ns) -> RunConfig:
    try:
        tol = Tolerance(ns.tol_rank, ns.tol_eq)
    except DomainError as exc:
        raise UsageError(str(exc)) from None
    return RunConfig(command=ns.command, model=ns.model, points=ns.points, samples=ns.samples, seed=ns.seed,
                     tol=tol, fmt=ns.fmt, out=ns.out, suite=getattr(ns, "suite", None),
                     trials=getattr(ns, "trials", 20))


def render(cfg: RunConfig, doc: dict) -> str:
    return ser.to_csv(cfg.command, doc) if cfg.fmt == "csv" else ser.dumps(doc)


def main(argv=None) -> int:
    ap = build_parser()
    try:
        ns = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        cfg = config_from_args(ns)
        doc = COMMANDS[cfg.command](cfg)
    except (UsageError, OSError) as exc:
        print(f"rcircles: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (PreconditionError, DomainError) as exc:
        print(f"rcircles: precondition failed: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (InconsistencyError, np.linalg.LinAlgError) as exc:
        print(f"rcircles: inconsistency: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT
    text = render(cfg, doc)
    if cfg.out:
        Path(cfg.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    if cfg.command == "check":
        return EXIT_OK if doc["passed"] else EXIT_FAIL
    if cfg.command == "prevalent":
        return EXIT_OK if doc["agree"] else EXIT_INCONSISTENT
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

"""Canonical JSON encoding of points, curves and reports.

Encodings:

* sphere point: list of floats (unit vector).
* Grassmannian / isotropic point: ``{"field", "rows", "cols", "data"}`` with the
  basis matrix stored column-major.  ``rows`` and ``cols`` count F-scalars; an
  entry is a number over R, ``[re, im]`` over C and ``[w, x, y, z]`` over H.
* classical group point: the matrix A with P = graph(A), same matrix encoding.
* quadric point: ``{"u", "v"}``, an orthonormal oriented frame.
* the parameter value infinity is the string ``"inf"``.
"""

from __future__ import annotations

import csv
import io
import json
import math

import numpy as np

from .classical import ClassicalGroupElement, ClassicalModel, graph_embed, graph_matrix
from .grassmann import SubspacePoint
from .quadric import OrientedPlane, oriented_plane
from .scalars import DEFAULT_TOL, DomainError, Field, Tolerance, embed, unembed
from .sphere import _unit

NUMBER = {"type": "number"}
PARAM = {"oneOf": [NUMBER, {"const": "inf"}]}

MATRIX_SCHEMA = {
    "type": "object",
    "required": ["field", "rows", "cols", "data"],
    "additionalProperties": False,
    "properties": {
        "field": {"enum": ["R", "C", "H"]},
        "rows": {"type": "integer", "minimum": 1},
        "cols": {"type": "integer", "minimum": 1},
        "data": {
            "type": "array",
            "items": {"oneOf": [NUMBER, {"type": "array", "items": NUMBER, "minItems": 2, "maxItems": 2},
                                {"type": "array", "items": NUMBER, "minItems": 4, "maxItems": 4}]},
        },
    },
}

VECTOR_SCHEMA = {"type": "array", "items": NUMBER, "minItems": 2}

PLANE_SCHEMA = {
    "type": "object",
    "required": ["u", "v"],
    "additionalProperties": False,
    "properties": {"u": VECTOR_SCHEMA, "v": VECTOR_SCHEMA},
}

POINT_SCHEMA = {"oneOf": [VECTOR_SCHEMA, MATRIX_SCHEMA, PLANE_SCHEMA]}

CIRCLE_SCHEMA = {
    "type": "object",
    "required": ["model", "defining_points", "samples"],
    "additionalProperties": False,
    "properties": {
        "model": {"type": "string"},
        "defining_points": {"type": "array", "items": POINT_SCHEMA, "minItems": 3, "maxItems": 3},
        "samples": {
            "type": "array",
            "items": {"type": "object", "required": ["t", "point"], "additionalProperties": False,
                      "properties": {"t": PARAM, "point": POINT_SCHEMA}},
        },
    },
}

GEODESIC_SCHEMA = {
    "type": "object",
    "required": ["model", "defining_points", "samples", "max_gap"],
    "additionalProperties": False,
    "properties": {
        "model": {"type": "string"},
        "defining_points": {"type": "array", "items": POINT_SCHEMA, "minItems": 3, "maxItems": 3},
        "samples": {
            "type": "array",
            "items": {"type": "object", "required": ["s", "point"], "additionalProperties": False,
                      "properties": {"s": NUMBER, "point": POINT_SCHEMA}},
        },
        "max_gap": NUMBER,
    },
}

FAMILY_STATS = {
    "type": "object",
    "required": ["trials", "failures", "max_residual"],
    "properties": {"trials": {"type": "integer"}, "failures": {"type": "integer"}, "max_residual": NUMBER},
}

REPORT_SCHEMA = {
    "type": "object",
    "required": ["suite", "passed", "trials", "failures", "max_residual", "seed", "tolerance", "families", "results"],
    "additionalProperties": False,
    "properties": {
        "suite": {"type": "string"},
        "passed": {"type": "boolean"},
        "trials": {"type": "integer"},
        "failures": {"type": "integer"},
        "max_residual": NUMBER,
        "seed": {"type": "integer"},
        "tolerance": {"type": "object", "required": ["rank_rel", "eq_abs"],
                      "properties": {"rank_rel": NUMBER, "eq_abs": NUMBER}},
        "families": {"type": "object", "additionalProperties": FAMILY_STATS},
        "results": {
            "type": "array",
            "items": {"type": "object", "required": ["family", "trial", "passed", "residual"],
                      "additionalProperties": False,
                      "properties": {"family": {"type": "string"}, "trial": {"type": "integer"},
                                     "passed": {"type": "boolean"}, "residual": {"oneOf": [NUMBER, {"const": "inf"}]}}},
        },
        "notes": {"type": "array", "items": {"type": "string"}},
    },
}

ANGLES_SCHEMA = {
    "type": "object",
    "required": ["planes", "alpha", "beta", "opposite", "form_margin", "angle_margin"],
    "additionalProperties": False,
    "properties": {
        "planes": {"type": "array", "items": PLANE_SCHEMA, "minItems": 2, "maxItems": 2},
        "alpha": NUMBER,
        "beta": NUMBER,
        "opposite": {"type": "boolean"},
        "form_margin": NUMBER,
        "angle_margin": NUMBER,
    },
}

PREVALENT_SCHEMA = {
    "type": "object",
    "required": ["model", "p", "q", "y", "is_prevalent", "iso_check", "sampled_opposite", "agree"],
    "additionalProperties": False,
    "properties": {
        "model": {"type": "string"},
        "p": POINT_SCHEMA,
        "q": POINT_SCHEMA,
        "y": MATRIX_SCHEMA,
        "is_prevalent": {"type": "boolean"},
        "iso_check": {"type": "boolean"},
        "sampled_opposite": {"type": "boolean"},
        "agree": {"type": "boolean"},
    },
}

SCHEMAS = {
    "circle": CIRCLE_SCHEMA,
    "geodesic": GEODESIC_SCHEMA,
    "check": REPORT_SCHEMA,
    "angles": ANGLES_SCHEMA,
    "prevalent": PREVALENT_SCHEMA,
}

CSV_HEADERS = {
    "circle": ["index", "t", "point"],
    "geodesic": ["index", "s", "point"],
    "check": ["family", "trial", "passed", "residual"],
    "angles": ["alpha", "beta", "opposite", "form_margin", "angle_margin"],
    "prevalent": ["is_prevalent", "iso_check", "sampled_opposite", "agree"],
}


# -- numbers and matrices -------------------------------------------------------

def encode_param(t):
    return "inf" if isinstance(t, float) and math.isinf(t) else float(t)


def decode_param(t) -> float:
    return math.inf if t == "inf" else float(t)


def _num(x) -> float:
    x = float(x)
    return 0.0 if x == 0 else x  # drop negative zero


def encode_matrix(M, field: Field | str) -> dict:
    """F-matrix (embedded for H) to the column-major field-tagged encoding."""
    field = Field(field)
    M = np.asarray(M)
    if field is Field.H:
        Q = unembed(M)
        rows, cols = Q.shape[:2]
        data = [[_num(c) for c in Q[i, j]] for j in range(cols) for i in range(rows)]
    elif field is Field.C:
        M = M.astype(complex)
        rows, cols = M.shape
        data = [[_num(M[i, j].real), _num(M[i, j].imag)] for j in range(cols) for i in range(rows)]
    else:
        if np.iscomplexobj(M):
            M = M.real
        rows, cols = M.shape
        data = [_num(M[i, j]) for j in range(cols) for i in range(rows)]
    return {"field": field.value, "rows": rows, "cols": cols, "data": data}


def decode_matrix(obj) -> tuple[Field, np.ndarray]:
    try:
        field = Field(obj["field"])
        rows, cols, data = int(obj["rows"]), int(obj["cols"]), obj["data"]
    except (KeyError, TypeError, ValueError) as exc:
        raise DomainError(f"malformed matrix encoding: {exc}") from None
    if len(data) != rows * cols:
        raise DomainError("matrix data length does not match rows * cols")
    width = {Field.R: None, Field.C: 2, Field.H: 4}[field]
    try:
        arr = np.array(data, dtype=float)
    except (TypeError, ValueError):
        raise DomainError("matrix entries must be numbers or fixed-length number lists") from None
    if (width is None and arr.ndim != 1) or (width is not None and arr.shape[1:] != (width,)):
        raise DomainError(f"entries over {field.value} must have {width or 1} components")
    if field is Field.R:
        return field, arr.reshape(cols, rows).T.copy()
    if field is Field.C:
        z = arr[:, 0] + 1j * arr[:, 1]
        return field, z.reshape(cols, rows).T.copy()
    Q = arr.reshape(cols, rows, 4).transpose(1, 0, 2)
    return field, embed(Q)


# -- points ---------------------------------------------------------------------

def encode_point(model, point):
    kind = model.name
    if kind == "sphere":
        return [_num(x) for x in np.asarray(point, dtype=float)]
    if kind == "quadric":
        return {"u": [_num(x) for x in point.u], "v": [_num(x) for x in point.v]}
    if isinstance(model, ClassicalModel):
        return encode_matrix(graph_matrix(point, model.tol), model.field)
    return encode_matrix(point.basis, point.field)


def decode_point(model, obj, tol: Tolerance = DEFAULT_TOL):
    """Parse and validate one point for ``model``; DomainError when malformed."""
    kind = model.name
    if kind == "sphere":
        if not isinstance(obj, list):
            raise DomainError("sphere points are lists of numbers")
        p = _unit(np.array(obj, dtype=float), tol)
        if p.shape != (model.n + 1,):
            raise DomainError(f"sphere:{model.n} points have {model.n + 1} coordinates")
        return p
    if kind == "quadric":
        if not isinstance(obj, dict) or set(obj) != {"u", "v"}:
            raise DomainError("quadric points are {'u': [...], 'v': [...]}")
        u, v = np.array(obj["u"], dtype=float), np.array(obj["v"], dtype=float)
        if u.shape != (model.N,) or v.shape != (model.N,):
            raise DomainError(f"quadric:{model.N} frame vectors have {model.N} coordinates")
        return oriented_plane(u, v, tol)
    field, M = decode_matrix(obj)
    if field is not model.field:
        raise DomainError(f"expected field {model.field.value}, got {field.value}")
    if isinstance(model, ClassicalModel):
        size = model.n * field.block
        if M.shape != (size, size):
            raise DomainError(f"classical:{model.group}:{model.n} points are {model.n}x{model.n} matrices")
        return graph_embed(ClassicalGroupElement(model.group, M.real if field is Field.R else M), tol)
    m, k = 2 * model.n * field.block, model.n * field.block
    if M.shape != (m, k):
        raise DomainError(f"basis must be {2 * model.n}x{model.n} over {field.value}")
    P = SubspacePoint(field, M)
    if hasattr(model, "form") and model.form.isotropy_residual(M) > tol.eq_abs:
        raise DomainError("subspace is not isotropic for the model's form")
    return P


def algebra_field(model) -> Field:
    return {"sphere": Field.R, "quadric": Field.C}.get(model.name, getattr(model, "field", Field.C))


def encode_algebra_element(model, y) -> dict:
    return encode_matrix(y, algebra_field(model))


def decode_algebra_element(model, obj, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    field, y = decode_matrix(obj)
    if field is not algebra_field(model):
        raise DomainError(f"algebra elements for this model are over {algebra_field(model).value}")
    if y.shape != (model.algebra.N,) * 2:
        raise DomainError(f"algebra elements are {model.algebra.N}x{model.algebra.N} (embedded)")
    if not model.algebra.contains(y, tol):
        raise DomainError("matrix is not in the model's Lie algebra")
    return y


def decode_plane(obj, tol: Tolerance = DEFAULT_TOL) -> OrientedPlane:
    if not isinstance(obj, dict) or set(obj) != {"u", "v"}:
        raise DomainError("planes are {'u': [...], 'v': [...]}")
    u, v = np.array(obj["u"], dtype=float), np.array(obj["v"], dtype=float)
    if u.ndim != 1 or u.shape != v.shape or u.shape[0] < 4:
        raise DomainError("plane frame vectors must have equal length N >= 4")
    return oriented_plane(u, v, tol)


# -- documents ------------------------------------------------------------------

def dumps(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=False, ensure_ascii=False) + "\n"


def to_csv(command: str, doc) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADERS[command])
    if command in ("circle", "geodesic"):
        key = "t" if command == "circle" else "s"
        for i, rec in enumerate(doc["samples"]):
            w.writerow([i, rec[key], json.dumps(rec["point"], separators=(",", ":"))])
    elif command == "check":
        for rec in doc["results"]:
            w.writerow([rec["family"], rec["trial"], rec["passed"], rec["residual"]])
    else:
        w.writerow([doc[h] for h in CSV_HEADERS[command]])
    return buf.getvalue()

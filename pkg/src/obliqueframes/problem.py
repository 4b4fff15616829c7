"""
Problem files and reports.

A problem file is JSON with rows-as-vectors; internally frames and bases
are columns-as-vectors. Conversion happens here and nowhere else.
"""

import hashlib
import json
import math
import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import OrthonormalizedInput, ParseError, ValidationError
from .frames import Frame, SubspacePair
from .linalg import DEFAULT_TOL, Tol, is_orthonormal, orthonormalize

__all__ = [
    "Problem", "parse_problem", "load_problem", "parse_rows", "encode_rows",
    "encode_matrix", "dumps", "digest",
]

FIELDS = ("real", "complex")
KNOWN_KEYS = {"ambient_dim", "field", "frame", "V_basis", "W_basis", "trace_budget", "spectrum", "seed"}


@dataclass(frozen=True, eq=False)
class Problem:
    F: Frame
    sp: SubspacePair
    field: str
    trace_budget: Optional[float] = None
    spectrum: Optional[np.ndarray] = None
    seed: Optional[int] = None
    digest: str = ""


def digest(raw: bytes) -> str:
    return "sha256:" + hashlib.sha256(raw).hexdigest()


def _number(x, where):
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise ParseError(f"{where}: expected a number, got {x!r}")
    if not math.isfinite(x):
        raise ParseError(f"{where}: non-finite entry")
    return float(x)


def _entry(x, field, where):
    if field == "real":
        return _number(x, where)
    if not (isinstance(x, list) and len(x) == 2):
        raise ParseError(f"{where}: complex entries are [re, im] pairs, got {x!r}")
    return complex(_number(x[0], where), _number(x[1], where))


def parse_rows(rows, field: str, p: int, name: str = "frame") -> np.ndarray:
    """k x p rows of entries -> p x k column matrix."""
    if field not in FIELDS:
        raise ParseError(f"field must be one of {FIELDS}, got {field!r}")
    if not isinstance(rows, list) or not rows:
        raise ParseError(f"{name}: expected a nonempty list of rows")
    out = np.empty((len(rows), p), dtype=complex)
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != p:
            raise ValidationError(f"{name}[{i}]: expected {p} entries (ambient_dim)")
        for j, x in enumerate(row):
            out[i, j] = _entry(x, field, f"{name}[{i}][{j}]")
    return out.T


def _basis(rows, field, p, name, tol):
    B = parse_rows(rows, field, p, name)
    if is_orthonormal(B, tol):
        return B
    Q, correction = orthonormalize(B, tol)
    warnings.warn(f"{name} was not orthonormal; QR correction ||B*B - I||_F = {correction:.3e}",
                  OrthonormalizedInput, stacklevel=3)
    return Q


def parse_problem(data, tol: Tol = DEFAULT_TOL, raw: bytes = b"") -> Problem:
    if not isinstance(data, dict):
        raise ParseError("problem file must be a JSON object")
    unknown = set(data) - KNOWN_KEYS
    if unknown:
        raise ParseError(f"unknown keys: {sorted(unknown)}")
    for key in ("ambient_dim", "field", "frame"):
        if key not in data:
            raise ParseError(f"missing required key {key!r}")
    p = data["ambient_dim"]
    if isinstance(p, bool) or not isinstance(p, int) or p < 1:
        raise ValidationError(f"ambient_dim must be a positive integer, got {p!r}")
    field = data["field"]
    F = Frame(parse_rows(data["frame"], field, p, "frame"), tol)
    W = _basis(data["W_basis"], field, p, "W_basis", tol) if "W_basis" in data else F.span_basis
    V = _basis(data["V_basis"], field, p, "V_basis", tol) if "V_basis" in data else W
    sp = SubspacePair(V, W, tol)

    t = data.get("trace_budget")
    if t is not None:
        t = _number(t, "trace_budget")
    mu = data.get("spectrum")
    if mu is not None:
        if not isinstance(mu, list):
            raise ParseError("spectrum must be a list of numbers")
        mu = np.array([_number(x, f"spectrum[{i}]") for i, x in enumerate(mu)])
    seed = data.get("seed")
    if seed is not None and (isinstance(seed, bool) or not isinstance(seed, int)):
        raise ParseError(f"seed must be an integer, got {seed!r}")
    return Problem(F, sp, field, t, mu, seed, digest(raw))


def load_problem(path, tol: Tol = DEFAULT_TOL) -> Problem:
    with open(path, "rb") as fh:
        raw = fh.read()
    try:
        data = json.loads(raw)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise ParseError(f"{path}: invalid JSON ({exc})") from None
    return parse_problem(data, tol, raw)


def encode_matrix(A, field: str = "complex"):
    """Nested lists; complex entries as [re, im] unless field is real."""
    A = np.asarray(A)
    if field == "real":
        return np.real(A).tolist()
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(A, dtype=complex)]


def encode_rows(T, field: str):
    """A p x n column matrix as n rows, in the problem-file encoding."""
    return encode_matrix(np.asarray(T).T, field)


def _emit(obj, out):
    if obj is None or isinstance(obj, bool):
        out.append(json.dumps(obj))
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        x = float(obj)
        out.append(format(x, ".17g") if math.isfinite(x) else json.dumps(str(x)))
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, np.ndarray):
        _emit(obj.tolist(), out)
    elif isinstance(obj, (list, tuple)):
        out.append("[")
        for i, x in enumerate(obj):
            if i:
                out.append(", ")
            _emit(x, out)
        out.append("]")
    elif isinstance(obj, dict):
        out.append("{")
        for i, (k, v) in enumerate(obj.items()):
            if i:
                out.append(", ")
            out.append(json.dumps(str(k)) + ": ")
            _emit(v, out)
        out.append("}")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj) -> str:
    """JSON with every float written to 17 significant digits."""
    out = []
    _emit(obj, out)
    return "".join(out)

"""
Vector orders on nonnegative spectra, convex potentials and water-filling.

Order checks operate on zero-padded, decreasingly sorted copies of their
arguments, and every inequality carries an additive slack ``tol.eq``.
Argument order follows the reading "y dominates x": ``submajorizes(y, x)``
is true iff x is submajorized by y.
"""

from dataclasses import dataclass, field
from typing import Optional, Tuple, Union

import numpy as np

from .errors import BadM, BadPotential, BadTrace, CrossCheckFailed, NonPositiveEigenvalue, ValidationError
from .linalg import DEFAULT_TOL, Tol

__all__ = [
    "as_spectrum", "pad", "submajorizes", "majorizes", "log_majorizes",
    "weak_log_majorizes", "leq_pointwise", "OrderReport", "order_chain_check",
    "PotentialSpec", "potential", "waterfill",
]


def as_spectrum(x, length: Optional[int] = None) -> np.ndarray:
    """Validate a list of nonnegative reals and return it sorted nonincreasingly.

    Tiny negative entries (roundoff, above ``-1e-12`` relative) are clipped to 0.
    """
    x = np.asarray(x, dtype=float).ravel()
    if not np.all(np.isfinite(x)):
        raise ValidationError("spectrum has non-finite entries")
    scale = max(1.0, float(np.max(np.abs(x)))) if x.size else 1.0
    if x.size and x.min() < -1e-12 * scale:
        raise ValidationError(f"spectrum has negative entry {x.min():.3e}")
    x = np.sort(np.clip(x, 0.0, None))[::-1]
    if length is not None:
        x = pad(x, length)
    return x


def pad(x, length: int) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.size > length:
        raise ValidationError(f"cannot pad length {x.size} to {length}")
    return np.concatenate([x, np.zeros(length - x.size)])


Slack = Union[Tol, float]


def _eq(tol: Slack) -> float:
    """Additive slack: ``tol.eq``, or a bare float (0 means exact)."""
    return tol.eq if isinstance(tol, Tol) else float(tol)


def _pair(y, x):
    y = np.sort(np.clip(np.asarray(y, dtype=float).ravel(), 0.0, None))[::-1]
    x = np.sort(np.clip(np.asarray(x, dtype=float).ravel(), 0.0, None))[::-1]
    n = max(x.size, y.size)
    return pad(y, n), pad(x, n)


def submajorizes(y, x, tol: Slack = DEFAULT_TOL) -> bool:
    """True iff every partial sum of x (sorted down) is <= that of y."""
    y, x = _pair(y, x)
    return bool(np.all(np.cumsum(x) <= np.cumsum(y) + _eq(tol)))


def majorizes(y, x, tol: Slack = DEFAULT_TOL) -> bool:
    y, x = _pair(y, x)
    return submajorizes(y, x, tol) and abs(x.sum() - y.sum()) <= _eq(tol)


def _log_partials(v):
    # partial sums of logs; -inf from the first zero on
    with np.errstate(divide="ignore"):
        return np.cumsum(np.log(v))


def weak_log_majorizes(y, x, tol: Slack = DEFAULT_TOL) -> bool:
    """Partial products of x (sorted down) are <= those of y for every k.

    Products are compared through sums of logarithms with relative slack
    ``tol``; a zero on the x side makes the comparison trivially true from
    that index on, a zero only on the y side makes it false.
    """
    y, x = _pair(y, x)
    lx, ly = _log_partials(x), _log_partials(y)
    for a, b in zip(lx, ly):
        if a == -np.inf:
            continue
        if b == -np.inf or a > b + _eq(tol):
            return False
    return True


def log_majorizes(y, x, tol: Slack = DEFAULT_TOL) -> bool:
    """Log-majorization: weak log-majorization for k < d plus equal total products."""
    y, x = _pair(y, x)
    if x.size == 0:
        return True
    lx, ly = _log_partials(x), _log_partials(y)
    for a, b in zip(lx[:-1], ly[:-1]):
        if a == -np.inf:
            continue
        if b == -np.inf or a > b + _eq(tol):
            return False
    a, b = lx[-1], ly[-1]
    if a == -np.inf or b == -np.inf:
        return a == b
    return abs(a - b) <= _eq(tol)


def leq_pointwise(x, y, tol: Slack = DEFAULT_TOL) -> bool:
    """Entrywise x <= y on the given (unsorted) order, after zero padding."""
    x = np.asarray(x, dtype=float).ravel()
    y = np.asarray(y, dtype=float).ravel()
    n = max(x.size, y.size)
    return bool(np.all(pad(x, n) <= pad(y, n) + _eq(tol)))


def as_spectrum_unsorted(x) -> np.ndarray:
    x = np.asarray(x, dtype=float).ravel()
    if x.size and (not np.all(np.isfinite(x)) or x.min() < 0):
        raise ValidationError("order checks need finite nonnegative vectors")
    return x


_EXACT = 0.0  # slack for premises in order_chain_check


@dataclass(frozen=True)
class OrderReport:
    pointwise: bool          # x <= y entrywise
    sorted_pointwise: bool   # sort(x) <= sort(y) entrywise
    weak_log: bool           # x weakly log-majorized by y
    log: bool                # x log-majorized by y (equal total products)
    weak: bool               # x submajorized by y
    violations: Tuple[str, ...] = field(default=())

    @property
    def chain_holds(self) -> bool:
        return not self.violations


def order_chain_check(x, y, tol: Tol = DEFAULT_TOL, strict: bool = True) -> OrderReport:
    """Evaluate the orders between x and y and check the implication chain

        x <= y  =>  sort(x) <= sort(y)  =>  x weakly log-maj. by y  =>  x submaj. by y

    together with ``log => weak_log``. The reported relations use ``tol``.
    An implication counts as violated only when its premise holds exactly
    and its conclusion fails even with slack: the additive and logarithmic
    slacks are not comparable, so a premise that holds only within ``tol``
    proves nothing about the next order. With ``strict`` a violation raises
    CrossCheckFailed; otherwise it is only reported.
    """
    x = as_spectrum_unsorted(x)
    y = as_spectrum_unsorted(y)
    n = max(x.size, y.size)
    x, y = pad(x, n), pad(y, n)
    ys, xs = _pair(y, x)

    def relations(t):
        return {
            "pointwise": leq_pointwise(x, y, t),
            "sorted_pointwise": leq_pointwise(xs, ys, t),
            "weak_log": weak_log_majorizes(y, x, t),
            "log": log_majorizes(y, x, t),
            "weak": submajorizes(y, x, t),
        }

    rel = relations(tol)
    exact = relations(_EXACT)
    chain = [("pointwise", "sorted_pointwise"), ("sorted_pointwise", "weak_log"),
             ("weak_log", "weak"), ("log", "weak_log")]
    violations = tuple(f"{a} => {b}" for a, b in chain if exact[a] and not rel[b])
    report = OrderReport(violations=violations, **rel)
    if strict and violations:
        raise CrossCheckFailed(f"order chain violated for x={x}, y={y}: {violations}")
    return report


@dataclass(frozen=True)
class PotentialSpec:
    """A convex function h on [0, inf) defining the potential sum_i h(s_i).

    kind is one of "fp" (x^2), "mse" (1/x, positive arguments only),
    "power" (x^q, q >= 1) and "pl" (sum_k (x - b_k)^+ over breakpoints b_k >= 0).
    """

    kind: str
    q: float = 2.0
    breakpoints: Tuple[float, ...] = ()

    def __post_init__(self):
        if self.kind not in ("fp", "mse", "power", "pl"):
            raise BadPotential(f"unknown potential kind {self.kind!r}")
        if self.kind == "power" and not self.q >= 1:
            raise BadPotential(f"power potential needs q >= 1, got {self.q}")
        if self.kind == "pl" and any(b < 0 for b in self.breakpoints):
            raise BadPotential("piecewise-linear breakpoints must be >= 0")

    @classmethod
    def frame_potential(cls):
        return cls("fp")

    @classmethod
    def mse(cls):
        return cls("mse")

    @classmethod
    def power(cls, q: float):
        return cls("power", q=float(q))

    @classmethod
    def piecewise_linear(cls, breakpoints):
        return cls("pl", breakpoints=tuple(float(b) for b in breakpoints))

    @classmethod
    def parse(cls, text: str):
        """Parse the CLI spelling: ``fp``, ``mse``, ``pq:<q>`` or ``pl:<b1>,<b2>,...``."""
        text = text.strip().lower()
        if text == "fp":
            return cls.frame_potential()
        if text == "mse":
            return cls.mse()
        if text.startswith("pq:"):
            return cls.power(float(text[3:]))
        if text.startswith("pl:"):
            return cls.piecewise_linear(float(b) for b in text[3:].split(",") if b)
        raise BadPotential(f"cannot parse potential {text!r}")

    @property
    def requires_positive(self) -> bool:
        return self.kind == "mse"

    @property
    def nondecreasing(self) -> bool:
        return self.kind != "mse"

    @property
    def vanishes_at_zero(self) -> bool:
        return self.kind != "mse"

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if self.kind == "fp":
            return x ** 2
        if self.kind == "power":
            return x ** self.q
        if self.kind == "mse":
            return 1.0 / x
        if not self.breakpoints:
            return np.zeros_like(x)
        return np.sum(np.clip(x[..., None] - np.asarray(self.breakpoints), 0.0, None), axis=-1)


def potential(spec: PotentialSpec, s, d: Optional[int] = None) -> float:
    """Sum of ``spec`` over the leading ``d`` entries of the spectrum ``s``.

    ``d`` is the dimension of the subspace the operator lives on; entries
    beyond it are the zero padding and are excluded.
    """
    s = as_spectrum(s)
    d = s.size if d is None else int(d)
    if d > s.size:
        s = pad(s, d)
    head = s[:d]
    if spec.requires_positive and np.any(head <= 0):
        raise NonPositiveEigenvalue(f"{spec.kind} potential needs positive eigenvalues, got {head.min():.3e}")
    return float(np.sum(spec(head)))


def waterfill(lam, m: int, t: float, tol: Tol = DEFAULT_TOL):
    """Water-filling of ``lam`` up to total trace ``t`` with the top ``max(m, 0)``
    entries frozen.

    Returns ``(nu, c)``: the level ``c >= lam[-1]`` solving
    ``sum_{i > max(m,0)} (c - lam_i)^+ = t - sum(lam)``, and ``nu`` with
    ``nu_i = max(lam_i, c)`` on the unfrozen tail, sorted nonincreasingly.
    The level is found exactly on the active segment of the piecewise-linear
    equation; no iterative root finder is involved.
    """
    lam = np.asarray(lam, dtype=float).ravel()
    d = lam.size
    if d == 0:
        raise ValidationError("waterfill needs a nonempty spectrum")
    if np.any(np.diff(lam) > tol.eq) or lam.min() < -tol.eq:
        raise ValidationError("waterfill needs a nonincreasing nonnegative spectrum")
    lam = np.clip(lam, 0.0, None)
    m = int(m)
    if m >= d:
        raise BadM(f"m = {m} must be smaller than d = {d}")
    excess = float(t) - lam.sum()
    if excess < -tol.eq:
        raise BadTrace(f"t = {t} is below tr(lambda) = {lam.sum()}")
    excess = max(excess, 0.0)

    k0 = max(m, 0)
    tail = lam[k0:]
    L = tail.size
    # raise the r smallest tail entries to a common level c; pick the first
    # r for which c does not exceed the next breakpoint
    suffix = np.cumsum(tail[::-1])  # suffix[r-1] = sum of the r smallest
    c = tail[-1]
    for r in range(1, L + 1):
        c = (excess + suffix[r - 1]) / r
        if r == L or c <= tail[L - r - 1]:
            break
    c = max(c, tail[-1])

    nu = lam.copy()
    active = np.arange(d) >= k0
    active &= lam < c
    nu[active] = c
    residual = float(t) - nu.sum()
    if excess > 0 and active.any():
        # keep tr(nu) = t exactly up to rounding, without breaking the level
        nu[active] += residual / active.sum()
    return np.sort(nu)[::-1], float(c)

"""
Principal angles between V and W and what they say about oblique duals:
multiplicative Lidskii bounds on the spectrum of the canonical V-dual and
the rigid rotations of W that make that spectrum as small as possible.
"""

import warnings
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from .duality import canonical_v_spectrum, optimal_dual
from .errors import ConjectureRegime, CrossCheckFailed, DegenerateSpectrum, NotComplementary, RankDeficient
from .frames import Frame, SubspacePair, eigenlist, frame_operator, require_span
from .linalg import as_matrix, eig_hermitian, hermitian_part
from .majorization import majorizes, pad, waterfill

__all__ = [
    "AngleData", "principal_angles", "principal_angles_between", "LidskiiReport",
    "lidskii_bounds", "RotationPlan", "optimal_rotation", "predicted_rotation_spectrum",
    "combined_optimal", "conjecture_experiment",
]


@dataclass(frozen=True, eq=False)
class AngleData:
    """Principal angles (nondecreasing) and paired principal vectors.

    Columns satisfy P_W v_i = cos(theta_i) w_i and P_V w_i = cos(theta_i) v_i.
    """

    thetas: np.ndarray
    W_principal: np.ndarray
    V_principal: np.ndarray

    @property
    def cosines(self) -> np.ndarray:
        return np.cos(self.thetas)

    @property
    def friedrichs(self) -> float:
        """The largest principal angle."""
        return float(self.thetas[-1])

    @property
    def dixmier(self) -> float:
        """The smallest principal angle."""
        return float(self.thetas[0])


def principal_angles_between(V_basis, W_basis) -> AngleData:
    V = as_matrix(V_basis)
    W = as_matrix(W_basis)
    if V.shape != W.shape:
        raise RankDeficient(f"dim V = {V.shape[1]} differs from dim W = {W.shape[1]}")
    Uw, s, Vh = np.linalg.svd(W.conj().T @ V)
    w = W @ Uw
    v = V @ Vh.conj().T
    cos = np.clip(s, 0.0, 1.0)
    # sines from the W-perp component of v_i keep small angles accurate
    sin = np.linalg.norm(v - w * cos, axis=0)
    thetas = np.arctan2(sin, cos)
    return AngleData(thetas, w, v)


def principal_angles(sp: SubspacePair) -> AngleData:
    return principal_angles_between(sp.V_basis, sp.W_basis)


def _require_complementary(angles: AngleData):
    if not np.all(np.cos(angles.thetas) > 1e-12):
        raise NotComplementary("largest principal angle is pi/2")


def _frame_data(F: Frame, sp: SubspacePair):
    """Eigenvalues of S_F on W (descending) and principal angles."""
    require_span(F, sp)
    angles = principal_angles(sp)
    _require_complementary(angles)
    lam = eigenlist(F)[:sp.d]
    return lam, angles


@dataclass(frozen=True)
class LidskiiReport:
    """Partial products (k = 1..d) of the lower envelope, of the canonical
    V-dual spectrum, and of the upper envelope, with relative margins."""

    lower: np.ndarray              # mu = sort_down(1 / (lam_{d-j+1} cos^2 theta_j))
    lower_products: np.ndarray
    measured_products: np.ndarray
    upper_products: np.ndarray
    lower_margins: np.ndarray      # measured / lower - 1
    upper_margins: np.ndarray      # upper / measured - 1

    @property
    def holds(self) -> bool:
        return bool(np.all(self.lower_margins >= -1e-8) and np.all(self.upper_margins >= -1e-8))


def lidskii_bounds(F: Frame, sp: SubspacePair) -> LidskiiReport:
    lam, angles = _frame_data(F, sp)
    d = sp.d
    cos2 = np.cos(angles.thetas) ** 2
    mu = np.sort(1.0 / (lam[::-1] * cos2))[::-1]
    measured = canonical_v_spectrum(F, sp)[:d]
    lower_p = np.cumprod(mu)
    measured_p = np.cumprod(measured)
    # k-th upper bound: 1 / prod_{j = d-k+1..d} lam_j cos^2 theta_j
    upper_p = 1.0 / np.cumprod((lam * cos2)[::-1])
    return LidskiiReport(
        lower=mu,
        lower_products=lower_p,
        measured_products=measured_p,
        upper_products=upper_p,
        lower_margins=measured_p / lower_p - 1.0,
        upper_margins=upper_p / measured_p - 1.0,
    )


@dataclass(frozen=True, eq=False)
class RotationPlan:
    """A unitary U with U(W) = W sending the eigenvectors x_j of S_F
    (descending eigenvalues) to the principal vectors w_{d-j+1}."""

    U: np.ndarray
    x_basis: np.ndarray
    predicted_spectrum: np.ndarray
    measured_spectrum: np.ndarray
    residual: float
    notes: Tuple[str, ...] = field(default=())

    def apply(self, F: Frame) -> Frame:
        return F.apply(self.U)


def predicted_rotation_spectrum(lam, thetas, p: int) -> np.ndarray:
    lam = np.asarray(lam, dtype=float)
    values = 1.0 / (np.cos(np.asarray(thetas)) ** 2 * lam[::-1])
    return pad(np.sort(values)[::-1], p)


def optimal_rotation(F: Frame, sp: SubspacePair) -> RotationPlan:
    """The rotation of W minimizing the spectrum of the canonical V-dual.

    U acts as the identity on W-perp. The spectrum of the rotated frame's
    canonical V-dual is checked against the closed form.
    """
    lam, angles = _frame_data(F, sp)
    tol = F.tol
    d = sp.d
    S = frame_operator(F)
    vals, coords = eig_hermitian(hermitian_part(sp.W_basis.conj().T @ S @ sp.W_basis), tol)
    x = sp.W_basis @ coords
    notes = []
    if d > 1 and np.min(np.abs(np.diff(vals))) <= tol.eq * max(1.0, vals[0]):
        msg = "S_F has repeated eigenvalues on W; the eigenbasis (and U) is not unique"
        warnings.warn(msg, DegenerateSpectrum, stacklevel=2)
        notes.append(msg)
    w_rev = angles.W_principal[:, ::-1]
    U = w_rev @ x.conj().T + sp.P_W_perp
    predicted = predicted_rotation_spectrum(lam, angles.thetas, sp.ambient_dim)
    measured = canonical_v_spectrum(F.apply(U), sp)
    residual = float(np.max(np.abs(measured - predicted)))
    if residual > tol.eq * max(1.0, predicted[0]):
        raise CrossCheckFailed(f"rotated spectrum misses the closed form by {residual:.3e}")
    return RotationPlan(U, x, predicted, measured, residual, tuple(notes))


def combined_optimal(F: Frame, sp: SubspacePair, t: float):
    """Optimal rotation followed by the trace-constrained optimal dual.

    Only available for n >= 2d; returns ``(plan, certificate, nu)``.
    """
    if 2 * sp.d - F.n >= 1:
        raise ConjectureRegime(f"n = {F.n} < 2d = {2 * sp.d}; the combined optimum is unproven here")
    plan = optimal_rotation(F, sp)
    cert, nu = optimal_dual(plan.apply(F), sp, t)
    return plan, cert, nu


@dataclass(frozen=True)
class ConjectureObservation:
    samples: int
    violations: int
    worst_margin: float
    regime_proven: bool
    details: List[str] = field(default_factory=list)


def conjecture_experiment(F: Frame, sp: SubspacePair, t: Optional[float] = None,
                          samples: int = 50, seed=None) -> ConjectureObservation:
    """Sample rotations U and check whether the water-filled spectrum built on
    U0 is majorized by the one built on U. Never raises on a violation; works
    in any regime, including 2d - n >= 1 where nothing is proven."""
    from .sampling import random_w_unitary

    lam, angles = _frame_data(F, sp)
    plan = optimal_rotation(F, sp)
    d, m = sp.d, 2 * sp.d - F.n
    rng = np.random.default_rng(seed)
    spectra = [canonical_v_spectrum(F.apply(random_w_unitary(sp.W_basis, rng)), sp)[:d]
               for _ in range(samples)]
    base = plan.predicted_spectrum[:d]
    if t is None:
        t = 1.5 * max(float(s.sum()) for s in spectra)
    nu0, _ = waterfill(base, m, t)
    violations = 0
    worst = np.inf
    details = []
    for i, s in enumerate(spectra):
        if t < s.sum():
            continue
        nu, _ = waterfill(s, m, t)
        margin = float(np.min(np.cumsum(nu) - np.cumsum(nu0)))
        worst = min(worst, margin)
        if not majorizes(nu, nu0):
            violations += 1
            details.append(f"sample {i}: min partial-sum margin {margin:.3e}")
    return ConjectureObservation(samples, violations, float(worst), m <= 0, details)

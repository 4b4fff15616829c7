"""
Aliasing of consistent sampling and of oblique dual pairs.

All W-perp compressions are formed in an explicit orthonormal basis of
W-perp, so they are (p - d) x (p - d) matrices.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .duality import certify, canonical_v_dual
from .errors import BadPotential, CrossCheckFailed
from .frames import Frame, SubspacePair, frame_operator
from .geometry import _frame_data, optimal_rotation, principal_angles
from .linalg import eig_hermitian, hermitian_part, op_norm, svd
from .majorization import PotentialSpec

__all__ = [
    "AliasingReport", "subspace_aliasing", "pair_aliasing", "h_aliasing",
    "min_aliasing_rotation", "w_perp_compression",
]


@dataclass(frozen=True, eq=False)
class AliasingReport:
    subspace_aliasing: float
    pair_aliasing: float
    witness: Optional[np.ndarray]   # unit vector in W-perp attaining the sup
    h_aliasing: Optional[float] = None


def subspace_aliasing(sp: SubspacePair) -> float:
    """Norm of P_{W//V-perp} restricted to W-perp, cross-checked against
    tan of the largest principal angle."""
    tol = sp.tol
    by_definition = op_norm(sp.P_oblique_adjoint @ sp.W_perp_basis) if sp.W_perp_basis.size else 0.0
    closed_form = float(np.tan(principal_angles(sp).friedrichs))
    if abs(by_definition - closed_form) > tol.eq * max(1.0, closed_form):
        raise CrossCheckFailed(f"aliasing {by_definition!r} differs from tan(theta_d) = {closed_form!r}")
    return by_definition


def w_perp_compression(S, sp: SubspacePair) -> np.ndarray:
    Wp = sp.W_perp_basis
    return hermitian_part(Wp.conj().T @ S @ Wp)


def pair_aliasing(F: Frame, G: Frame, sp: SubspacePair) -> AliasingReport:
    """Aliasing of the dual pair (F, G): sqrt of the norm of S_G compressed to W-perp."""
    cert = certify(F, G, sp)
    tol = F.tol
    sub = subspace_aliasing(sp)
    if sp.W_perp_basis.shape[1] == 0:
        return AliasingReport(sub, 0.0, None)
    # singular values of Wp* T_G are the square roots of the compression's
    # eigenvalues, without the loss of accuracy of a square root near zero
    U, s, _ = svd(sp.W_perp_basis.conj().T @ cert.G.vectors, tol)
    witness = sp.W_perp_basis @ U[:, 0]
    return AliasingReport(sub, float(s[0]), witness)


def h_aliasing(F: Frame, G: Frame, sp: SubspacePair, spec: PotentialSpec) -> float:
    """tr h of S_G compressed to W-perp, for nondecreasing h with h(0) = 0."""
    if not (spec.nondecreasing and spec.vanishes_at_zero):
        raise BadPotential(f"aliasing potential needs h(0) = 0 and h nondecreasing; got {spec.kind}")
    cert = certify(F, G, sp)
    if sp.W_perp_basis.shape[1] == 0:
        return 0.0
    vals = np.clip(eig_hermitian(w_perp_compression(frame_operator(cert.G), sp), F.tol).values, 0.0, None)
    return float(np.sum(spec(vals)))


def min_aliasing_rotation(F: Frame, sp: SubspacePair):
    """Rotation of W minimizing the aliasing of the canonical pair.

    Returns ``(plan, achieved)`` with achieved = max_j tan(theta_j) / sqrt(lam_{d-j+1}),
    verified against the aliasing of the rotated canonical pair.
    """
    lam, angles = _frame_data(F, sp)
    achieved = float(np.max(np.tan(angles.thetas) / np.sqrt(lam[::-1])))
    plan = optimal_rotation(F, sp)
    rotated = plan.apply(F)
    measured = pair_aliasing(rotated, canonical_v_dual(rotated, sp), sp).pair_aliasing
    if abs(measured - achieved) > F.tol.eq * max(1.0, achieved):
        raise CrossCheckFailed(f"rotated pair aliasing {measured!r} differs from bound {achieved!r}")
    return plan, achieved

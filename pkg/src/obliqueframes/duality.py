"""
Oblique V-duals of a frame F for W.

Every V-dual is T_G = T_{F#_V} + Z with Z T_F* = 0 and range(Z) in V, so
S_G = S_{F#_V} + Z Z*. Duals with a prescribed perturbation B = Z Z* are
built by mapping an orthonormal family of ker T_F onto the eigenvectors of B.
"""

from dataclasses import dataclass, field, replace
from typing import List, Optional, Tuple

import numpy as np

from .errors import BadTrace, CrossCheckFailed, NotADual, NotFeasible, RankBudgetExceeded, ValidationError
from .frames import Frame, SubspacePair, canonical_v_dual, compressed_eigenlist, frame_operator, require_span
from .linalg import Tol, eig_hermitian, hermitian_part, kernel_basis, op_norm
from .majorization import as_spectrum, pad, waterfill

__all__ = [
    "DualCertificate", "FeasibilityVerdict", "certify", "canonical_v_spectrum",
    "lift_classical_dual", "check_feasible_spectrum", "parseval_dual_exists",
    "parseval_dual_exists_operator", "construct_parseval_dual", "optimal_dual",
    "random_dual", "dual_from_perturbation",
]


@dataclass(frozen=True, eq=False)
class DualCertificate:
    """A V-dual G of F with the residuals of the identities it satisfies.

    B = S_G - S_{F#_V} is PSD with range in V and rank at most n - d.
    """

    G: Frame
    residual_duality: float   # ||T_G T_F* - P_{V//W-perp}||_F
    residual_adjoint: float   # ||T_F T_G* - P_{W//V-perp}||_F
    residual_in_V: float      # ||P_{V-perp} T_G||_F
    B: np.ndarray
    rank_B: int
    min_eig_B: float
    trace: float              # sum ||g_i||^2 = tr S_G
    commutator: Optional[float] = None  # ||[S_{F#_V}, B]||_F, set by optimal_dual

    @property
    def spectrum(self) -> np.ndarray:
        return compressed_eigenlist(frame_operator(self.G), self.G.span_basis, self.G.tol)


@dataclass(frozen=True)
class FeasibilityVerdict:
    """Outcome of the spectral test; ``violated`` holds (0-based index into mu, kind)."""

    feasible: bool
    violated: List[Tuple[int, str]] = field(default_factory=list)
    m: int = 0


def _m(F: Frame, sp: SubspacePair) -> int:
    return 2 * sp.d - F.n


def certify(F: Frame, G, sp: SubspacePair, tol: Optional[Tol] = None) -> DualCertificate:
    """Check that G is a V-dual of F and package the residuals.

    Raises NotADual when G leaves V or fails T_G T_F* = P_{V//W-perp}.
    """
    tol = tol or F.tol
    if not isinstance(G, Frame):
        G = Frame(G, tol)
    if G.vectors.shape != F.vectors.shape:
        raise NotADual(f"shape mismatch: {G.vectors.shape} vs {F.vectors.shape}")
    P = sp.P_oblique
    TG, TF = G.vectors, F.vectors
    scale = max(1.0, float(np.linalg.norm(P)))
    residual = float(np.linalg.norm(TG @ TF.conj().T - P))
    residual_adj = float(np.linalg.norm(TF @ TG.conj().T - P.conj().T))
    residual_v = float(np.linalg.norm(TG - sp.P_V @ TG))
    if residual_v > tol.eq * max(1.0, float(np.linalg.norm(TG))):
        raise NotADual(f"vectors leave V (residual {residual_v:.3e})")
    if residual > tol.eq * scale:
        raise NotADual(f"T_G T_F* differs from the oblique projector by {residual:.3e}")

    S_G = frame_operator(G)
    S_c = frame_operator(canonical_v_dual(F, sp))
    B = hermitian_part(S_G - S_c)
    # B lives on V; its eigenvalues there carry all the information
    b_vals = eig_hermitian(sp.V_basis.conj().T @ B @ sp.V_basis, tol).values
    cutoff = tol.rank * max(1.0, op_norm(S_G))
    return DualCertificate(
        G=G,
        residual_duality=residual,
        residual_adjoint=residual_adj,
        residual_in_V=residual_v,
        B=B,
        rank_B=int(np.sum(b_vals > cutoff)),
        min_eig_B=float(b_vals[-1]),
        trace=float(np.real(np.trace(S_G))),
    )


def canonical_v_spectrum(F: Frame, sp: SubspacePair) -> np.ndarray:
    """Eigenvalues of S_{F#_V}, zero-padded to the ambient dimension."""
    return compressed_eigenlist(frame_operator(canonical_v_dual(F, sp)), sp.V_basis, F.tol)


def lift_classical_dual(F: Frame, K: Frame, sp: SubspacePair) -> Frame:
    """Map a classical dual K of F (in W) to the V-dual {P_{V//W-perp} k_i}."""
    require_span(F, sp)
    tol = F.tol
    TK = K.vectors
    if TK.shape != F.vectors.shape:
        raise NotADual("K must have as many vectors as F")
    if np.linalg.norm(TK - sp.P_W @ TK) > tol.eq * max(1.0, float(np.linalg.norm(TK))):
        raise NotADual("K is not contained in W")
    if np.linalg.norm(TK @ F.vectors.conj().T - sp.P_W) > tol.eq * max(1.0, np.sqrt(sp.d)):
        raise NotADual("K is not a classical dual of F")
    return Frame(sp.P_oblique @ TK, tol)


def check_feasible_spectrum(mu, F: Frame, sp: SubspacePair, tol: Optional[Tol] = None) -> FeasibilityVerdict:
    """Decide whether some V-dual of F has frame-operator eigenvalues ``mu``.

    With lam the eigenvalues of S_{F#_V} and m = 2d - n the conditions are
    mu_i >= lam_i for i < d, mu_{d-m+i} <= lam_i for i < m (only when m >= 1)
    and mu_i = 0 beyond d. Indices in the verdict are 0-based positions in mu.
    """
    tol = tol or F.tol
    d = sp.d
    lam = canonical_v_spectrum(F, sp)
    mu = as_spectrum(mu)
    size = max(mu.size, lam.size)
    mu, lam = pad(mu, size), pad(lam, size)
    m = _m(F, sp)
    violated = []
    for i in range(d):
        if mu[i] < lam[i] - tol.eq:
            violated.append((i, "lower"))
    for i in range(max(m, 0)):
        j = d - m + i
        if mu[j] > lam[i] + tol.eq:
            violated.append((j, "upper"))
    for i in range(d, size):
        if mu[i] > tol.eq:
            violated.append((i, "tail-zero"))
    return FeasibilityVerdict(feasible=not violated, violated=violated, m=m)


def parseval_dual_exists(F: Frame, sp: SubspacePair) -> FeasibilityVerdict:
    """Whether F has a V-dual that is a Parseval frame for V."""
    return check_feasible_spectrum(np.ones(sp.d), F, sp)


def parseval_dual_exists_operator(F: Frame, sp: SubspacePair) -> bool:
    """Operator form of the same test: S_{F#_V} <= P_V and
    rank(P_V - S_{F#_V}) <= n - d."""
    tol = F.tol
    S_c = frame_operator(canonical_v_dual(F, sp))
    gap = sp.V_basis.conj().T @ (sp.P_V - S_c) @ sp.V_basis
    vals = eig_hermitian(hermitian_part(gap), tol).values
    if vals[-1] < -tol.eq:
        return False
    return int(np.sum(vals > tol.eq)) <= F.n - sp.d


def dual_from_perturbation(F: Frame, sp: SubspacePair, coords, weights,
                           tol: Optional[Tol] = None) -> DualCertificate:
    """Build the V-dual with S_G = S_{F#_V} + sum_j weights_j u_j u_j*.

    ``coords`` (d x r) holds orthonormal coordinates of u_j in ``sp.V_basis``;
    ``weights`` are the nonnegative eigenvalues of the perturbation. The
    partial isometry sends the j-th column of the kernel basis of T_F to u_j.
    """
    tol = tol or F.tol
    weights = np.asarray(weights, dtype=float)
    keep = weights > 0
    coords = np.asarray(coords, dtype=complex)[:, keep]
    weights = weights[keep]
    K = kernel_basis(F.vectors, tol)
    if weights.size > K.shape[1]:
        raise RankBudgetExceeded(f"perturbation of rank {weights.size} exceeds n - d = {K.shape[1]}")
    canon = canonical_v_dual(F, sp)
    U = sp.V_basis @ coords
    Z = (U * np.sqrt(weights)) @ K[:, :weights.size].conj().T
    return certify(F, Frame(canon.vectors + Z, tol), sp, tol)


def construct_parseval_dual(F: Frame, sp: SubspacePair) -> DualCertificate:
    """A V-dual of F whose frame operator is P_V; raises NotFeasible if none exists."""
    verdict = parseval_dual_exists(F, sp)
    if not verdict.feasible:
        raise NotFeasible(f"no Parseval V-dual: violated {verdict.violated}")
    tol = F.tol
    S_c = frame_operator(canonical_v_dual(F, sp))
    gap = hermitian_part(sp.V_basis.conj().T @ (sp.P_V - S_c) @ sp.V_basis)
    vals, vecs = eig_hermitian(gap, tol)
    vals = np.where(vals > tol.eq, vals, 0.0)
    return dual_from_perturbation(F, sp, vecs, vals, tol)


def optimal_dual(F: Frame, sp: SubspacePair, t: float):
    """The V-dual minimizing every nondecreasing convex potential among
    duals with sum ||g_i||^2 >= t.

    Returns ``(certificate, nu)`` where ``nu`` (zero-padded) is the
    water-filled spectrum of S_{F#_V} with m = 2d - n frozen entries. The
    perturbation B is diagonal in the eigenbasis of S_{F#_V}, with weights
    (c - lam_i)^+ placed against the smallest eigenvalues.
    """
    require_span(F, sp)
    tol = F.tol
    S_c = frame_operator(canonical_v_dual(F, sp))
    A0 = hermitian_part(sp.V_basis.conj().T @ S_c @ sp.V_basis)
    lam, Zc = eig_hermitian(A0, tol)
    lam = np.clip(lam, 0.0, None)
    d, m = sp.d, _m(F, sp)
    if t < lam.sum() - tol.eq:
        raise BadTrace(f"t = {t} is below tr S_(F#_V) = {lam.sum()}")

    nu, c = waterfill(lam, m, t, tol)
    k0 = max(m, 0)
    beta = np.zeros(d)
    beta[k0:] = np.clip(c - lam[k0:], 0.0, None)
    active = beta > 0
    if active.any():
        beta[active] += (t - lam.sum() - beta.sum()) / active.sum()
    if np.max(np.abs(np.sort(lam + beta)[::-1] - nu)) > tol.eq:
        raise CrossCheckFailed("water-filling weights disagree with waterfill()")

    cert = dual_from_perturbation(F, sp, Zc, beta, tol)
    commutator = float(np.linalg.norm(S_c @ cert.B - cert.B @ S_c))
    cert = replace(cert, commutator=commutator)
    return cert, pad(nu, sp.ambient_dim)


def random_dual(F: Frame, sp: SubspacePair, seed=None, rank_budget: Optional[int] = None,
                energy: float = 1.0) -> DualCertificate:
    """A pseudo-random V-dual with tr(S_G - S_{F#_V}) = energy and
    rank(S_G - S_{F#_V}) <= rank_budget. Deterministic for a given seed."""
    require_span(F, sp)
    tol = F.tol
    budget = F.n - sp.d if rank_budget is None else int(rank_budget)
    if budget < 0 or budget > F.n - sp.d:
        raise ValidationError(f"rank_budget must lie in [0, {F.n - sp.d}], got {rank_budget}")
    if energy < 0:
        raise ValidationError("energy must be nonnegative")
    canon = canonical_v_dual(F, sp)
    if budget == 0 or energy == 0:
        return certify(F, canon, sp, tol)
    rng = np.random.default_rng(seed)
    K = kernel_basis(F.vectors, tol)

    def gauss(*shape):
        return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)

    # Z = V C1 C2* K*: range in V, kills range(T_F*), rank <= budget
    C = gauss(sp.d, budget) @ gauss(K.shape[1], budget).conj().T
    Z = sp.V_basis @ C @ K.conj().T
    Z *= np.sqrt(energy) / np.linalg.norm(Z)
    return certify(F, Frame(canon.vectors + Z, tol), sp, tol)

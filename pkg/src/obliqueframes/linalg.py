"""
Dense complex linear algebra kernels and the shared tolerance policy.

Everything here works on small dense matrices (dimension up to a few dozen).
All matrices are promoted to ``complex128``; real input is embedded with zero
imaginary part.
"""

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
import scipy.linalg

from .errors import (
    NoConvergence, NotComplementary, NotHermitian, RankDeficient, ValidationError,
)

__all__ = [
    "Tol", "DEFAULT_TOL", "EigH", "as_matrix", "hermitian_part", "check_hermitian",
    "eig_hermitian", "eigvals_hermitian", "svd", "pinv", "numerical_rank",
    "range_basis", "kernel_basis", "complement_basis", "orthonormalize",
    "is_orthonormal", "orthogonal_projector", "oblique_projector", "op_norm",
    "psd_sqrt",
]

JACOBI_SWEEPS = 30
_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class Tol:
    """Tolerance policy.

    rank: relative singular-value cutoff (times the largest singular value).
    eq:   residual tolerance for operator identities.
    sym:  Hermitian-symmetry tolerance.
    """

    rank: float = 1e-10
    eq: float = 1e-8
    sym: float = 1e-10

    def __post_init__(self):
        for name in ("rank", "eq", "sym"):
            value = getattr(self, name)
            if not (value > 0 and np.isfinite(value)):
                raise ValidationError(f"tolerance {name} must be positive, got {value!r}")


DEFAULT_TOL = Tol()


class EigH(NamedTuple):
    values: np.ndarray   # nonincreasing, real
    vectors: np.ndarray  # orthonormal columns aligned with values


def as_matrix(A) -> np.ndarray:
    A = np.asarray(A, dtype=complex)
    if A.ndim == 1:
        A = A[:, None]
    if A.ndim != 2 or A.shape[0] < 1 or A.shape[1] < 1:
        raise ValidationError(f"expected a nonempty 2-d array, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValidationError("matrix has non-finite entries")
    return A


def hermitian_part(A) -> np.ndarray:
    A = np.asarray(A, dtype=complex)
    return 0.5 * (A + A.conj().T)


def check_hermitian(A, tol: Tol = DEFAULT_TOL) -> np.ndarray:
    """Return ``A`` as a complex square matrix, raising NotHermitian otherwise.

    The symmetry defect is measured relative to ``max(1, max|A_ij|)`` so that
    operators with large entries are not rejected for roundoff.
    """
    A = as_matrix(A)
    if A.shape[0] != A.shape[1]:
        raise NotHermitian(f"matrix is not square: {A.shape}")
    defect = np.max(np.abs(A - A.conj().T))
    scale = max(1.0, float(np.max(np.abs(A))))
    if defect > tol.sym * scale:
        raise NotHermitian(f"max|A - A*| = {defect:.3e} exceeds {tol.sym:.1e}")
    return A


def eig_hermitian(A, tol: Tol = DEFAULT_TOL, sweeps: int = JACOBI_SWEEPS) -> EigH:
    """Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi rotations.

    Returns eigenvalues in nonincreasing order; equal eigenvalues keep the
    order in which they leave the sweep (stable sort).
    Raises NoConvergence after ``sweeps`` full sweeps.
    """
    A = hermitian_part(check_hermitian(A, tol)).copy()
    n = A.shape[0]
    Q = np.eye(n, dtype=complex)
    scale = np.linalg.norm(A)
    threshold = max(n, 1) * _EPS * scale

    for _ in range(sweeps + 1):
        off = np.linalg.norm(A - np.diag(np.diag(A)))
        if off <= threshold:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                b = A[p, q]
                r = abs(b)
                if r == 0.0:
                    continue
                theta = (A[q, q].real - A[p, p].real) / (2.0 * r)
                t = (1.0 if theta >= 0 else -1.0) / (abs(theta) + np.hypot(theta, 1.0))
                c = 1.0 / np.hypot(t, 1.0)
                s = t * c
                ph = b / r
                # columns: A <- A G with G = [[c, s ph], [-s conj(ph), c]]
                ap = A[:, p].copy()
                aq = A[:, q]
                A[:, p] = c * ap - s * np.conj(ph) * aq
                A[:, q] = s * ph * ap + c * aq
                # rows: A <- G* A
                rp = A[p, :].copy()
                rq = A[q, :]
                A[p, :] = c * rp - s * ph * rq
                A[q, :] = s * np.conj(ph) * rp + c * rq
                A[p, q] = A[q, p] = 0.0
                qp = Q[:, p].copy()
                qq = Q[:, q]
                Q[:, p] = c * qp - s * np.conj(ph) * qq
                Q[:, q] = s * ph * qp + c * qq
    else:
        raise NoConvergence(f"Jacobi did not converge within {sweeps} sweeps")

    values = np.diag(A).real.copy()
    order = np.argsort(-values, kind="stable")
    return EigH(values[order], Q[:, order])


def eigvals_hermitian(A, tol: Tol = DEFAULT_TOL) -> np.ndarray:
    return eig_hermitian(A, tol).values


def svd(A, tol: Tol = DEFAULT_TOL):
    """Thin SVD ``A = U diag(s) V*`` with ``s`` nonincreasing.

    Returns ``(U, s, V)``; note ``V`` (not ``V*``).
    """
    A = as_matrix(A)
    try:
        U, s, Vh = np.linalg.svd(A, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise NoConvergence(str(exc)) from exc
    return U, s, Vh.conj().T


def _cutoff(s, tol: Tol) -> float:
    return tol.rank * (s[0] if s.size else 0.0)


def numerical_rank(A, tol: Tol = DEFAULT_TOL) -> int:
    _, s, _ = svd(A, tol)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.sum(s > _cutoff(s, tol)))


def pinv(A, tol: Tol = DEFAULT_TOL) -> np.ndarray:
    """Moore-Penrose pseudoinverse with a relative singular-value cutoff."""
    A = as_matrix(A)
    U, s, V = svd(A, tol)
    if s[0] == 0.0:
        return np.zeros(A.shape[::-1], dtype=complex)
    keep = s > _cutoff(s, tol)
    return (V[:, keep] / s[keep]) @ U[:, keep].conj().T


def range_basis(A, tol: Tol = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis (columns) of the column space of ``A``."""
    U, s, _ = svd(A, tol)
    if s.size == 0 or s[0] == 0.0:
        return U[:, :0]
    return U[:, s > _cutoff(s, tol)]


def kernel_basis(T, tol: Tol = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis of ``ker T`` in a fixed, reproducible order.

    The kernel projector ``I - T^+ T`` is factored by QR with column
    pivoting; the leading ``n - rank(T)`` columns of Q are returned.
    """
    T = as_matrix(T)
    n = T.shape[1]
    k = n - numerical_rank(T, tol)
    if k == 0:
        return np.zeros((n, 0), dtype=complex)
    proj = np.eye(n, dtype=complex) - pinv(T, tol) @ T
    Q, _, _ = scipy.linalg.qr(hermitian_part(proj), pivoting=True)
    return Q[:, :k]


def complement_basis(B) -> np.ndarray:
    """Orthonormal basis of the orthogonal complement of range(B), B orthonormal."""
    B = as_matrix(B)
    p, d = B.shape
    U, _, _ = np.linalg.svd(B, full_matrices=True)
    return U[:, d:]


def orthonormalize(B, tol: Tol = DEFAULT_TOL):
    """QR with column pivoting; returns ``(Q, correction)``.

    ``Q`` has orthonormal columns spanning range(B); ``correction`` is
    ``||B* B - I||_F``, i.e. how far the input was from orthonormal.
    Raises RankDeficient for dependent columns.
    """
    B = as_matrix(B)
    d = B.shape[1]
    Q, R, _ = scipy.linalg.qr(B, mode="economic", pivoting=True)
    diag = np.abs(np.diag(R))
    if diag.size < d or diag[0] == 0.0 or diag[-1] <= tol.rank * diag[0]:
        raise RankDeficient(f"basis of {d} vectors is rank deficient")
    correction = float(np.linalg.norm(B.conj().T @ B - np.eye(d)))
    return Q[:, :d], correction


def is_orthonormal(B, tol: Tol = DEFAULT_TOL) -> bool:
    B = as_matrix(B)
    return bool(np.linalg.norm(B.conj().T @ B - np.eye(B.shape[1])) <= tol.eq)


def orthogonal_projector(B) -> np.ndarray:
    B = as_matrix(B)
    return B @ B.conj().T


def oblique_projector(V_basis, W_basis, tol: Tol = DEFAULT_TOL) -> np.ndarray:
    """Projector with range V and null space W-perp: ``V (W* V)^{-1} W*``."""
    V = as_matrix(V_basis)
    W = as_matrix(W_basis)
    if V.shape != W.shape:
        raise ValidationError(f"basis shapes differ: {V.shape} vs {W.shape}")
    if not (is_orthonormal(V, tol) and is_orthonormal(W, tol)):
        raise ValidationError("oblique_projector expects orthonormal bases")
    M = W.conj().T @ V
    smin = np.linalg.svd(M, compute_uv=False)[-1]
    if smin <= tol.rank:
        raise NotComplementary(f"W*V is singular (smallest singular value {smin:.3e})")
    return V @ np.linalg.solve(M, W.conj().T)


def op_norm(A) -> float:
    A = np.asarray(A, dtype=complex)
    if A.size == 0:
        return 0.0
    return float(np.linalg.svd(A, compute_uv=False)[0])


def psd_sqrt(A, tol: Tol = DEFAULT_TOL) -> np.ndarray:
    """Square root of a PSD matrix; eigenvalues below zero from roundoff are clipped."""
    values, vectors = eig_hermitian(A, tol)
    return (vectors * np.sqrt(np.clip(values, 0.0, None))) @ vectors.conj().T

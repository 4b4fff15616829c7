"""
Finite frames, subspace pairs, and the operators attached to them.

Vectors are stored as columns: a frame of n vectors in C^p is a p x n array,
which is also its synthesis operator.
"""

from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional

import numpy as np

from .errors import RankDeficient, SpanMismatch, ValidationError
from .linalg import (
    DEFAULT_TOL, Tol, as_matrix, complement_basis, eig_hermitian, hermitian_part,
    is_orthonormal, oblique_projector, orthogonal_projector, pinv, range_basis,
)
from .majorization import PotentialSpec, pad, potential

__all__ = [
    "Frame", "SubspacePair", "synthesis", "frame_operator", "eigenlist",
    "compressed_eigenlist", "canonical_dual", "canonical_v_dual",
    "is_parseval_for", "frame_potential_of", "largest_angle", "same_subspace",
]

SUBSPACE_EQ_ANGLE = 1e-8  # radians


@dataclass(frozen=True, eq=False)
class Frame:
    """An ordered sequence of n vectors (columns of ``vectors``) in C^p.

    ``span_dim`` is the numerical rank of the synthesis operator and is
    always computed, never taken from metadata.
    """

    vectors: np.ndarray
    tol: Tol = field(default=DEFAULT_TOL, repr=False)

    def __post_init__(self):
        T = as_matrix(self.vectors).copy()
        T.setflags(write=False)
        object.__setattr__(self, "vectors", T)
        if self.span_dim < 1:
            raise RankDeficient("a frame must span a subspace of dimension >= 1")

    @classmethod
    def from_rows(cls, rows, tol: Tol = DEFAULT_TOL) -> "Frame":
        """Build a frame from an n x p array whose rows are the vectors."""
        return cls(np.asarray(rows, dtype=complex).T, tol)

    @property
    def ambient_dim(self) -> int:
        return self.vectors.shape[0]

    @property
    def n(self) -> int:
        return self.vectors.shape[1]

    @cached_property
    def span_basis(self) -> np.ndarray:
        """Orthonormal basis (p x d) of the span of the frame."""
        return range_basis(self.vectors, self.tol)

    @property
    def span_dim(self) -> int:
        return self.span_basis.shape[1]

    def rows(self) -> np.ndarray:
        return self.vectors.T.copy()

    def apply(self, U) -> "Frame":
        """The frame {U f_i}."""
        return Frame(as_matrix(U) @ self.vectors, self.tol)

    def __len__(self):
        return self.n

    def __repr__(self):
        return f"Frame(p={self.ambient_dim}, n={self.n}, d={self.span_dim})"


@dataclass(frozen=True, eq=False)
class SubspacePair:
    """Orthonormal bases (p x d columns) of the subspaces V and W.

    Angles can be computed for any pair of equal dimension; the oblique
    projector (and every duality operation) additionally needs W-perp + V = H,
    which is checked lazily and signalled by NotComplementary.
    """

    V_basis: np.ndarray
    W_basis: np.ndarray
    tol: Tol = field(default=DEFAULT_TOL, repr=False)

    def __post_init__(self):
        V = as_matrix(self.V_basis).copy()
        W = as_matrix(self.W_basis).copy()
        if V.shape[0] != W.shape[0]:
            raise ValidationError(f"ambient dimensions differ: {V.shape[0]} vs {W.shape[0]}")
        if V.shape[1] != W.shape[1]:
            raise RankDeficient(f"dim V = {V.shape[1]} differs from dim W = {W.shape[1]}")
        if V.shape[1] > V.shape[0]:
            raise ValidationError("subspace dimension exceeds ambient dimension")
        for name, B in (("V", V), ("W", W)):
            if not is_orthonormal(B, self.tol):
                raise ValidationError(f"{name}_basis is not orthonormal")
            B.setflags(write=False)
        object.__setattr__(self, "V_basis", V)
        object.__setattr__(self, "W_basis", W)

    @classmethod
    def same(cls, basis, tol: Tol = DEFAULT_TOL) -> "SubspacePair":
        """The classical setting V = W."""
        return cls(basis, basis, tol)

    @property
    def ambient_dim(self) -> int:
        return self.W_basis.shape[0]

    @property
    def d(self) -> int:
        return self.W_basis.shape[1]

    @cached_property
    def P_V(self) -> np.ndarray:
        return orthogonal_projector(self.V_basis)

    @cached_property
    def P_W(self) -> np.ndarray:
        return orthogonal_projector(self.W_basis)

    @cached_property
    def W_perp_basis(self) -> np.ndarray:
        return complement_basis(self.W_basis)

    @cached_property
    def P_W_perp(self) -> np.ndarray:
        return np.eye(self.ambient_dim) - self.P_W

    @cached_property
    def P_oblique(self) -> np.ndarray:
        """P_{V//W-perp}: range V, null space W-perp."""
        P = oblique_projector(self.V_basis, self.W_basis, self.tol)
        P.setflags(write=False)
        return P

    @property
    def P_oblique_adjoint(self) -> np.ndarray:
        """P_{W//V-perp}, the adjoint of P_oblique."""
        return self.P_oblique.conj().T

    @property
    def is_complementary(self) -> bool:
        smin = np.linalg.svd(self.W_basis.conj().T @ self.V_basis, compute_uv=False)[-1]
        return bool(smin > self.tol.rank)


def largest_angle(A_basis, B_basis) -> float:
    """Largest principal angle between two subspaces of equal dimension."""
    A = as_matrix(A_basis)
    B = as_matrix(B_basis)
    if A.shape != B.shape:
        return np.pi / 2
    # sine of the largest angle = ||(I - P_A) B||
    resid = B - A @ (A.conj().T @ B)
    s = np.linalg.svd(resid, compute_uv=False)[0]
    return float(np.arcsin(min(s, 1.0)))


def same_subspace(A_basis, B_basis) -> bool:
    return largest_angle(A_basis, B_basis) < SUBSPACE_EQ_ANGLE


def require_span(F: Frame, sp: SubspacePair):
    if F.ambient_dim != sp.ambient_dim:
        raise SpanMismatch(f"frame lives in C^{F.ambient_dim}, subspaces in C^{sp.ambient_dim}")
    if not same_subspace(F.span_basis, sp.W_basis):
        raise SpanMismatch("span of the frame differs from W")


def synthesis(F: Frame) -> np.ndarray:
    return np.array(F.vectors)


def frame_operator(F: Frame) -> np.ndarray:
    T = F.vectors
    return hermitian_part(T @ T.conj().T)


def compressed_eigenlist(S, basis, tol: Tol = DEFAULT_TOL) -> np.ndarray:
    """Eigenvalues of the compression of S to range(basis), zero-padded to p.

    For a PSD operator whose range lies in range(basis) this is its full
    eigenvalue list with exact zeros beyond the subspace dimension.
    """
    basis = as_matrix(basis)
    C = basis.conj().T @ S @ basis
    values = np.clip(eig_hermitian(hermitian_part(C), tol).values, 0.0, None)
    return pad(values, basis.shape[0])


def eigenlist(F: Frame) -> np.ndarray:
    """Eigenvalues of S_F: d positive values followed by p - d zeros."""
    return compressed_eigenlist(frame_operator(F), F.span_basis, F.tol)


def canonical_dual(F: Frame) -> Frame:
    """The classical canonical dual {S_F^+ f_i}."""
    S_pinv = pinv(frame_operator(F), F.tol)
    return Frame(S_pinv @ F.vectors, F.tol)


def canonical_v_dual(F: Frame, sp: SubspacePair) -> Frame:
    """The canonical V-dual {P_{V//W-perp} S_F^+ f_i}."""
    require_span(F, sp)
    S_pinv = pinv(frame_operator(F), F.tol)
    return Frame(sp.P_oblique @ S_pinv @ F.vectors, F.tol)


def is_parseval_for(F: Frame, basis, tol: Optional[Tol] = None) -> bool:
    """True iff S_F equals the orthogonal projector onto range(basis)."""
    tol = tol or F.tol
    P = orthogonal_projector(basis)
    if P.shape != (F.ambient_dim, F.ambient_dim):
        return False
    return bool(np.linalg.norm(frame_operator(F) - P) <= tol.eq)


def frame_potential_of(F: Frame, spec: PotentialSpec) -> float:
    """Convex potential P_h(F) over the nonzero part of the spectrum."""
    return potential(spec, eigenlist(F), F.span_dim)

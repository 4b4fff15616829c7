"""Random problem instances for property checks and sampling oracles."""

from typing import NamedTuple, Optional

import numpy as np

from .frames import Frame, SubspacePair
from .linalg import DEFAULT_TOL, Tol

__all__ = [
    "Instance", "random_unitary", "random_w_unitary", "random_subspace_pair",
    "random_frame", "random_instance",
]


def _gauss(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_unitary(k: int, rng) -> np.ndarray:
    """Haar-distributed k x k unitary."""
    Q, R = np.linalg.qr(_gauss(rng, k, k))
    return Q * (np.diag(R) / np.abs(np.diag(R)))


def random_w_unitary(W_basis, rng) -> np.ndarray:
    """Unitary on C^p that maps W onto itself: Haar on W, identity on W-perp."""
    W = np.asarray(W_basis, dtype=complex)
    p, d = W.shape
    return W @ random_unitary(d, rng) @ W.conj().T + (np.eye(p) - W @ W.conj().T)


def random_subspace_pair(rng, p: int, d: int, min_cos: float = 0.2,
                         tol: Tol = DEFAULT_TOL) -> SubspacePair:
    """Random complementary pair with every principal cosine >= min_cos."""
    while True:
        W, _ = np.linalg.qr(_gauss(rng, p, d))
        V, _ = np.linalg.qr(_gauss(rng, p, d))
        cos = np.linalg.svd(W.conj().T @ V, compute_uv=False)
        if cos[-1] >= min_cos:
            return SubspacePair(V, W, tol)


def random_frame(rng, W_basis, n: int, tol: Tol = DEFAULT_TOL,
                 max_cond: float = 50.0) -> Frame:
    """n random vectors spanning range(W_basis), with cond(S_F) <= max_cond."""
    W = np.asarray(W_basis, dtype=complex)
    d = W.shape[1]
    while True:
        C = _gauss(rng, d, n)
        s = np.linalg.svd(C, compute_uv=False)
        if s[-1] > 0 and (s[0] / s[-1]) ** 2 <= max_cond:
            return Frame(W @ C, tol)


class Instance(NamedTuple):
    F: Frame
    sp: SubspacePair


def random_instance(rng, p: Optional[int] = None, d: Optional[int] = None,
                    n: Optional[int] = None, min_n: Optional[int] = None,
                    tol: Tol = DEFAULT_TOL, min_cos: float = 0.2) -> Instance:
    """A frame for W together with a complementary pair (V, W).

    Unspecified sizes are drawn with 1 <= d <= 5, d <= p <= 12, d <= n <= 3d + 2;
    ``min_n`` raises the lower bound on n (e.g. 2d for the combined optimum).
    """
    if d is None:
        d = int(rng.integers(1, 6))
    if p is None:
        p = int(rng.integers(d, 13))
    if n is None:
        lo = max(d, (min_n or d))
        n = int(rng.integers(lo, max(lo, 3 * d + 2) + 1))
    sp = random_subspace_pair(rng, p, d, min_cos, tol)
    return Instance(random_frame(rng, sp.W_basis, n, tol), sp)

"""Oblique duality of finite frames: duals, spectra, principal angles and aliasing."""

from .errors import *  # noqa: F401,F403
from .linalg import DEFAULT_TOL, EigH, Tol, eig_hermitian, oblique_projector, pinv, svd
from .majorization import (
    PotentialSpec, log_majorizes, majorizes, order_chain_check, potential, submajorizes,
    waterfill, weak_log_majorizes,
)
from .frames import (
    Frame, SubspacePair, canonical_dual, canonical_v_dual, eigenlist, frame_operator,
    frame_potential_of, is_parseval_for, synthesis,
)
from .duality import (
    DualCertificate, FeasibilityVerdict, canonical_v_spectrum, certify, check_feasible_spectrum,
    construct_parseval_dual, lift_classical_dual, optimal_dual, parseval_dual_exists, random_dual,
)
from .geometry import (
    AngleData, RotationPlan, combined_optimal, lidskii_bounds, optimal_rotation, principal_angles,
)
from .aliasing import AliasingReport, h_aliasing, min_aliasing_rotation, pair_aliasing, subspace_aliasing

__version__ = "0.1.0"

"""Exception and warning types raised across the package."""


class FrameError(Exception):
    """Base class for all errors raised by obliqueframes."""


class ValidationError(FrameError, ValueError):
    """Input data violates a structural requirement (shape, rank, orthonormality)."""


class ParseError(ValidationError):
    """A problem file could not be decoded."""


class NotHermitian(ValidationError):
    pass


class RankDeficient(ValidationError):
    pass


class NoConvergence(FrameError, ArithmeticError):
    """An iterative kernel exhausted its sweep budget."""


class NotComplementary(FrameError):
    """The pair (V, W) does not satisfy W-perp + V = H as a direct sum."""


class SpanMismatch(FrameError):
    """The span of the frame differs from the subspace W it was paired with."""


class NotADual(FrameError):
    pass


class NotFeasible(FrameError):
    pass


class BadTrace(FrameError, ValueError):
    pass


class BadM(FrameError, ValueError):
    pass


class NonPositiveEigenvalue(FrameError, ArithmeticError):
    pass


class BadPotential(FrameError, ValueError):
    pass


class RankBudgetExceeded(FrameError):
    """A perturbation needs more rank than the kernel of the synthesis operator offers."""


class ConjectureRegime(FrameError):
    """Requested result is only known to hold for n >= 2d."""


class CrossCheckFailed(FrameError, AssertionError):
    """Two independent computations of the same quantity disagree."""


class DegenerateSpectrum(UserWarning):
    """Repeated eigenvalues make an eigenbasis (and hence a rotation) non-unique."""


class OrthonormalizedInput(UserWarning):
    """A basis given as input was not orthonormal and was replaced by its QR factor."""


class ConjectureRegimeWarning(UserWarning):
    """A result was reported outside the regime n >= 2d where it is proven."""

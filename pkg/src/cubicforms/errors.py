"""Domain errors shared across the package."""


class CubicFormError(Exception):
    """Base class for domain errors."""


class ZeroFormError(CubicFormError):
    """An operation that needs the sup-norm was handed the zero form."""


class DimensionMismatchError(CubicFormError):
    """Vector or matrix dimensions do not agree."""


class RankDeficientError(CubicFormError):
    """A rank/singular-value precondition failed (e.g. the k-th singular value vanishes)."""


class VanishingMinorError(CubicFormError):
    """The b x b minors of the Hessian all vanish at the chosen point."""


class ZeroEigenvalueError(CubicFormError):
    """An eigenvalue that must be nonzero is (numerically) zero."""


class NonDiagonalError(CubicFormError):
    """A diagonal-only routine was handed a non-diagonal system."""


class ZeroPredictionError(CubicFormError):
    """The predicted main term is zero, so ratios N(P)/prediction are undefined."""


class InconclusiveError(CubicFormError):
    """No branch of a dichotomy/trichotomy could be certified with our explicit constants."""

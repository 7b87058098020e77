"""Exception hierarchy.

Precondition violations (bad parameters, functionals outside the dual
cone, probes off the boundary) are kept distinct from numerical
breakdowns (spectral failures, root brackets, degenerate cones) so that
callers, and the command line front end in particular, can map them to
different exit codes.
"""


class LimconeError(Exception):
    """Base class for all package errors."""


class InvalidParameterError(LimconeError, ValueError):
    """A parameter violates a documented precondition."""


class InvalidInputError(LimconeError, ValueError):
    """Malformed input data (unknown letters, empty words, bad files)."""


class PerturbationFailedError(LimconeError):
    """Perturbed generator cannot be rescaled back to determinant one."""


class SpectralFailureError(LimconeError):
    """Singular value or eigenvalue computation cannot proceed."""


class UndefinedGapError(LimconeError):
    """Gap ratio requested for a matrix with vanishing top exponent."""


class NotInDualConeError(LimconeError):
    """Functional is not positive on all sampled Jordan projections."""


class InsufficientDataError(LimconeError):
    """Not enough usable samples or thresholds for the estimate."""


class DegenerateConeError(LimconeError):
    """Sampled spectra span a lower-dimensional cone."""


class BracketFailureError(LimconeError):
    """Root of the pressure could not be bracketed."""


class NotOnBoundaryError(LimconeError):
    """Functional is not certified to lie on the unit-exponent boundary."""

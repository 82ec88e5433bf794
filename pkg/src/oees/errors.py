"""Exception types shared across the package."""


class OeesError(Exception):
    """Base class for all package errors."""


class GapClosure(OeesError):
    """The energy gap at the requested filling closes (phase-transition point)."""

    def __init__(self, message, k=None):
        super().__init__(message)
        self.k = k


class SingularSpin(OeesError):
    """A spin expectation value with near-zero norm cannot be normalized."""

    def __init__(self, message, k=None):
        super().__init__(message)
        self.k = k


class SingularTriangle(OeesError):
    """A spherical triangle in the winding sum is degenerate (antipodal or zero vertices)."""


class BlockDecompositionUnavailable(OeesError):
    """Block diagonalization requires a real pairing vector and no symmetry-breaking term."""


class RangeTooSmall(OeesError):
    """Hopping extraction dropped non-negligible weight beyond the requested range."""


class TrackingAmbiguous(OeesError):
    """Band tracking between adjacent momentum samples is not unique."""


class ConfigError(OeesError):
    """Invalid or unknown run-configuration contents."""

"""Exception types shared across the package."""


class NearIntError(Exception):
    """Base class for every error raised by nearint."""


class DomainError(NearIntError, ValueError):
    """An argument lies outside the domain of the operation."""


class PreconditionError(NearIntError, ValueError):
    """Inputs are well-formed but violate a mathematical precondition."""


class CapExceededError(NearIntError, RuntimeError):
    """A configured size cap would be exceeded."""


class DegenerateCurveError(NearIntError, RuntimeError):
    """The sampled curve has a vanishing lower bilipschitz constant."""


class CalibrationError(NearIntError, RuntimeError):
    """A Monte-Carlo calibration failed its residual test."""

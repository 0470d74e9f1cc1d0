"""Exception types shared across the package.

Everything derives from :class:`SoftMeasError` (a ``ValueError``), so callers
can catch either the specific condition or the whole family.
"""


class SoftMeasError(ValueError):
    """Base class for all validation and domain errors raised here."""


class NotHermitian(SoftMeasError):
    """Matrix deviates from its conjugate transpose beyond tolerance."""


class NotPSD(SoftMeasError):
    """Hermitian matrix has an eigenvalue below the negativity tolerance."""


class ZeroMatrix(SoftMeasError):
    """Operation requires a nonzero matrix (e.g. pseudo inverse square root)."""


class DimensionMismatch(SoftMeasError):
    """Operand dimensions are incompatible."""


class InvalidState(SoftMeasError):
    """Density-matrix invariants (Hermitian, PSD, unit trace) are violated."""


class InvalidMeasurement(SoftMeasError):
    """Measurement parameterization fails its validity checks."""


class InvalidChannel(SoftMeasError):
    """Kraus operators do not form a trace-preserving channel."""


class InvalidParams(SoftMeasError):
    """Scalar parameter bundle violates its invariants."""


class OutOfRange(SoftMeasError):
    """Scalar argument outside its documented range."""


class ZeroDt(SoftMeasError):
    """Time step must be positive."""


class ConfigError(SoftMeasError):
    """Sweep configuration is malformed or out of range."""

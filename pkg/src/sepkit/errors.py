"""Exception types shared across the package."""


class SepkitError(Exception):
    """Base class for domain errors raised by sepkit."""


class DegreeOfZero(SepkitError, ValueError):
    """Degree or height requested for the zero polynomial."""


class ZeroOperand(SepkitError, ValueError):
    """Resultant requested with a zero polynomial operand."""


class NotSeparable(SepkitError, ValueError):
    """Root isolation requested for a polynomial with a multiple root."""


class PrecisionExhausted(SepkitError, ArithmeticError):
    """Working precision would exceed the configured ceiling."""


class UnresolvedUnitRoot(PrecisionExhausted):
    """Could not decide on which side of the unit circle a root lies."""


class OppositeRootPair(SepkitError, ValueError):
    """The polynomial has two roots summing to zero (or a root at zero)."""


class CertificateFailed(SepkitError):
    """A sign-change certificate did not show the expected sign pattern."""


class CheckpointError(SepkitError):
    """A search checkpoint file is unreadable or does not match the run."""

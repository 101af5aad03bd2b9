"""Exception types shared across the package."""


class QRealizeError(Exception):
    """Base class for all qrealize errors."""


class DimensionError(QRealizeError):
    """A matrix argument has an incompatible, odd, or nonpositive dimension."""


class ValidationError(QRealizeError):
    """A system violates one of the model invariants."""


class ParseError(ValidationError):
    """An input document could not be parsed into a system."""


class ContractError(QRealizeError):
    """An argument does not satisfy a documented precondition."""


class FactorizationError(QRealizeError):
    """A requested matrix factorization does not exist at the given tolerance."""


class NumericalError(QRealizeError):
    """A quantity that vanishes in exact arithmetic exceeded its tolerance."""


class SynthesisError(QRealizeError):
    """A synthesized realization failed verification.

    Carries the offending realization and its residual report so callers can
    still inspect or serialize the partial result.
    """

    def __init__(self, message, realization=None, report=None):
        super().__init__(message)
        self.realization = realization
        self.report = report

"""Exception types shared across the package."""

from __future__ import annotations


class PauliLieError(Exception):
    """Base class for all errors raised by this package."""


class PauliParseError(PauliLieError, ValueError):
    """Malformed Pauli text. Carries the 1-based column of the offending character."""

    def __init__(self, message: str, column: int | None = None):
        super().__init__(message)
        self.column = column


class DuplicateQubitError(PauliParseError):
    """A sparse Pauli names the same qubit twice."""


class WidthError(PauliLieError, ValueError):
    """Operands act on different qubit counts, or an index exceeds the declared width."""


class IdentityGeneratorError(PauliLieError, ValueError):
    """An identity string was offered as a generator; it contributes nothing."""


class ContractionPreconditionError(PauliLieError):
    """Contraction requested between commuting (non-adjacent) generators."""


class TogglePreconditionError(PauliLieError):
    """Toggle requested on an unlit vertex."""


class InternalDefectError(PauliLieError):
    """Internal-consistency defect: an invariant the algorithms guarantee was violated."""

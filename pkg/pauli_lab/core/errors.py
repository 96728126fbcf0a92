# core/errors.py
"""Domain errors raised by pauli_lab. Callers may catch the builtin bases."""
from typing import Any, Optional, Tuple


class PauliLabError(Exception):
    """Marker base shared by every domain error."""


class DimensionMismatchError(PauliLabError, ValueError):
    """Vectors or subspaces live in different symplectic spaces."""


class IsotropyError(PauliLabError, ValueError):
    """A span contains an anticommuting pair."""

    def __init__(self, message: str, witness: Optional[Tuple[Any, Any]] = None):
        super().__init__(message)
        self.witness = witness


class CapacityError(PauliLabError, ValueError):
    """An object-level size cap was exceeded."""


class ContractError(PauliLabError, ValueError):
    """A semantic precondition of an operation does not hold."""


class UnsupportedCaseError(PauliLabError, NotImplementedError):
    """The requested closed form is not shipped."""


class CertificateError(PauliLabError, ValueError):
    """A solver certificate failed independent re-validation."""

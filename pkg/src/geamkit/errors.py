"""Exception types shared across the library."""

from __future__ import annotations


class GeamkitError(Exception):
    """Base class for all geamkit errors."""


class DimensionMismatchError(GeamkitError, ValueError):
    """Operands have incompatible shapes or subsystem dimensions."""


class NumericalError(GeamkitError, RuntimeError):
    """A numerical routine failed to converge or an internal consistency
    check exceeded its tolerance."""


class ValidationError(GeamkitError, ValueError):
    """Structural relations are violated; carries the list of violations."""

    def __init__(self, message: str, violations: list[str] | None = None):
        super().__init__(message)
        self.violations = list(violations or [])

    def __str__(self) -> str:
        base = super().__str__()
        if self.violations:
            return base + "\n  - " + "\n  - ".join(self.violations)
        return base


class PositivityError(ValidationError):
    """An operator that must be positive semidefinite has a negative eigenvalue."""

    def __init__(
        self,
        message: str,
        frame: int | None = None,
        index: int | None = None,
        min_eigenvalue: float | None = None,
    ):
        super().__init__(message)
        self.frame = frame
        self.index = index
        self.min_eigenvalue = min_eigenvalue


class FeasibilityError(GeamkitError, ValueError):
    """No parameter value satisfies the requested constraints."""


class PremiseError(GeamkitError, ValueError):
    """The operation needs a conical 2-design and the input is not one."""


class SchemaError(GeamkitError, ValueError):
    """A JSON document does not match the expected schema."""

from __future__ import annotations

from typing import Any


class MolGratingError(Exception):
    """Base class for every error raised by molgrating."""


class DomainError(MolGratingError, ValueError):
    """A physical input lies outside the domain of the requested operation."""


class ValidationError(MolGratingError, ValueError):
    """User-supplied data (e.g. a tabulated density) failed a consistency check."""


class ConfigError(MolGratingError):
    """A run configuration could not be parsed or validated."""


class NumericalError(MolGratingError, ArithmeticError):
    """
    A numerical procedure did not reach the requested accuracy: a quadrature failed to converge,
    a linear solve was ill-conditioned or a minimizer stopped on the boundary of its search interval.
    The `diagnostics` dict carries whatever the failing routine knew at the time.
    """

    def __init__(self, msg: str, diagnostics: dict[str, Any] | None = None):
        super().__init__(msg)
        self.diagnostics = diagnostics if diagnostics is not None else {}

    def __str__(self) -> str:
        if not self.diagnostics:
            return super().__str__()
        details = ", ".join(f"{key}={value}" for key, value in self.diagnostics.items())
        return f"{super().__str__()} ({details})"

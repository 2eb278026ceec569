from __future__ import annotations

from typing import Callable, Sequence

from scipy import integrate

from molgrating.constants import QUAD_EPSABS, QUAD_EPSREL, QUAD_LIMIT, QUAD_MAX_RELATIVE_ERROR
from molgrating.errors import NumericalError


def checked_quad(
    func: Callable[[float], float],
    lower: float,
    upper: float,
    what: str,
    points: Sequence[float] | None = None,
    epsabs: float = QUAD_EPSABS,
    epsrel: float = QUAD_EPSREL,
    limit: int = QUAD_LIMIT,
    max_relative_error: float = QUAD_MAX_RELATIVE_ERROR,
    **kwargs,
) -> tuple[float, float]:
    """
    Wrapper around scipy.integrate.quad which raises a NumericalError instead of returning a result whose
    error estimate exceeds max(max_relative_error * |value|, 10 * epsabs).

    Every call gets its own QUADPACK workspace, so concurrent calls from a thread pool do not share state.

    Parameters
    ----------
    func: Callable[[float], float]
        Real-valued integrand.
    lower, upper: float
        Integration limits (may be infinite when `points` is None).
    what: str
        Human-readable name of the integral, used in error messages.
    points: Sequence[float] | None
        Interior break points (e.g. known length scales of the integrand).

    Returns
    -------
    tuple[float, float]
        The integral and QUADPACK's absolute error estimate.
    """
    if points is not None:
        points = sorted(p for p in points if lower < p < upper)
        if len(points) == 0:
            points = None

    value, abserr, info = integrate.quad(
        func, lower, upper, points=points, epsabs=epsabs, epsrel=epsrel, limit=limit, full_output=1, **kwargs
    )[:3]

    tolerance = max(max_relative_error * abs(value), 10 * epsabs)
    if abserr > tolerance:
        raise NumericalError(
            f"quadrature for {what} did not converge",
            diagnostics={
                "interval": (lower, upper),
                "value": value,
                "error_estimate": abserr,
                "tolerance": tolerance,
                "subintervals": info.get("last"),
                "evaluations": info.get("neval"),
            },
        )

    return value, abserr

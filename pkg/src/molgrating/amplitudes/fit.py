from __future__ import annotations

import math

import numpy as np
from scipy import integrate, optimize

from molgrating.amplitudes.bar import dimer_bar_amplitudes, point_bar_amplitude
from molgrating.dataclasses import BarSpec, BeamState, EffectiveWidthFit
from molgrating.errors import DomainError, NumericalError
from molgrating.models.dimer import DimerModel

# default number of K2 samples on [0, K2_max] for the least-squares objective
DEFAULT_FIT_SAMPLES = 301


def fit_effective_width(
    model: DimerModel,
    bar: BarSpec,
    beam: BeamState,
    k2_max: float,
    samples: int = DEFAULT_FIT_SAMPLES,
    xatol: float = 1e-6,
    verbose: bool = False,
) -> EffectiveWidthFit:
    """
    Find the widening delta for which a point particle scattered by a bar of width a + delta best matches the
    molecular intensity for small momentum transfer:

        delta = argmin int_0^{K2_max} ( |t_mol(K2)|^2 - |t_point, a + delta(K2)|^2 )^2 dK2

    The objective is a trapezoid rule on `samples` equidistant points; the minimization is a bounded
    scalar search over (-a / 2, min(a / 2, 2 pi / K2_max - a)), the upper end keeping K2_max below the
    first zero of the widened bar.
    """
    if not k2_max > 0:
        raise DomainError(f"K2_max must be positive, got {k2_max} nm^-1")
    if samples < 3:
        raise DomainError(f"need at least 3 fit samples, got {samples}")

    a = bar.width
    lower, upper = -a / 2, min(a / 2, 2 * math.pi / k2_max - a)
    if not lower < upper:
        raise DomainError(f"K2_max={k2_max} nm^-1 lies beyond the first zero of every admissible widened bar")

    k2_grid = np.linspace(0.0, k2_max, samples)
    dimer_intensity = np.abs(dimer_bar_amplitudes(k2_grid, bar, beam, model, normalized=True)) ** 2

    def point_intensity(delta: float) -> np.ndarray:
        return np.abs(point_bar_amplitude(k2_grid, BarSpec(width=a + delta), beam, normalized=True)) ** 2

    def objective(delta: float) -> float:
        return float(integrate.trapezoid((dimer_intensity - point_intensity(delta)) ** 2, k2_grid))

    result = optimize.minimize_scalar(objective, bounds=(lower, upper), method="bounded", options={"xatol": xatol})
    delta = float(result.x)

    if verbose:
        print(f"effective width fit: delta={delta:.6f} nm after {result.nfev} evaluations, objective={result.fun:.6g}")

    margin = 10 * xatol + 1e-6 * (upper - lower)
    if not result.success or delta - lower < margin or upper - delta < margin:
        raise NumericalError(
            "effective-width minimizer stopped on the boundary of its search interval",
            diagnostics={"delta": delta, "bounds": (lower, upper), "objective": result.fun, "message": result.message},
        )

    scale = float(integrate.trapezoid(dimer_intensity**2, k2_grid))
    return EffectiveWidthFit(
        delta=delta,
        residual=float(result.fun),
        relative_residual=float(result.fun) / scale if scale > 0 else math.nan,
        bar_width=a,
        k2_grid=k2_grid,
        dimer_intensity=dimer_intensity,
        point_intensity=point_intensity(delta),
        bounds=(lower, upper),
    )

"""
Coherent N-bar diffraction: single-bar amplitudes combined with the grating function, sampled in the
diffraction plane (K3 = 0).
"""

from __future__ import annotations

import math

import numpy as np

from molgrating.amplitudes.bar import dimer_bar_amplitude, point_bar_amplitude
from molgrating.dataclasses import BeamState, DiffractionOrder, DiffractionPattern, GratingGeometry, PeakRatios
from molgrating.errors import DomainError
from molgrating.models.dimer import DimerModel
from molgrating.utils.grid_helpers import evaluate_on_grid

# below this distance from an order position the grating function is evaluated by its series
_SERIES_THRESHOLD = 1e-8

# orders weaker than this fraction of the strongest order count as missing
ZERO_ORDER_TOLERANCE = 1e-12


def grating_function(k2: float | np.ndarray, period: float, bar_count: int) -> float | np.ndarray:
    """
    sin(N K2 d / 2) / sin(K2 d / 2).

    Writing K2 d / 2 = n pi + delta with integer n, the value is (-1)^{n (N - 1)} sin(N delta) / sin(delta),
    so the removable singularities at K2 = 2 pi n / d give exactly +-N.
    """
    if not period > 0:
        raise DomainError(f"period must be positive, got {period} nm")
    if int(bar_count) != bar_count or bar_count < 1:
        raise DomainError(f"bar count must be a positive integer, got {bar_count}")
    bar_count = int(bar_count)

    x = np.asarray(k2, dtype=float) * period / 2
    n = np.rint(x / math.pi)
    delta = x - n * math.pi
    sign = np.where((n.astype(np.int64) * (bar_count - 1)) % 2 == 0, 1.0, -1.0)

    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.sin(bar_count * delta) / np.sin(delta)
    series = bar_count * (1 - (bar_count**2 - 1) * delta**2 / 6)
    value = sign * np.where(np.abs(delta) < _SERIES_THRESHOLD, series, ratio)

    return float(value) if value.ndim == 0 else value


def _bar_amplitudes(
    k2: np.ndarray,
    geometry: GratingGeometry,
    beam: BeamState,
    model: DimerModel | None,
    normalized: bool,
    max_workers: int = 1,
    progress: bool = False,
) -> np.ndarray:
    if model is None:
        return np.asarray(point_bar_amplitude(k2, geometry.bar, beam, normalized), dtype=complex)

    return evaluate_on_grid(
        lambda k: dimer_bar_amplitude(k, geometry.bar, beam, model, normalized),
        k2,
        max_workers=max_workers,
        progress=progress,
    )


def coherent_amplitude(
    k2: float,
    geometry: GratingGeometry,
    beam: BeamState,
    model: DimerModel | None = None,
    normalized: bool = False,
) -> complex:
    """
    t_coh(K2) = t_bar(K2) sin(N K2 d / 2) / sin(K2 d / 2) for a bar of width d - s.

    `model=None` diffracts a point particle; otherwise the molecular bar amplitude of `model` is used.
    """
    if model is None:
        t_bar = point_bar_amplitude(k2, geometry.bar, beam, normalized)
    else:
        t_bar = dimer_bar_amplitude(k2, geometry.bar, beam, model, normalized)
    return complex(t_bar * grating_function(k2, geometry.period, geometry.bar_count))


def check_k2_grid(k2_grid: np.ndarray) -> np.ndarray:
    k2_grid = np.asarray(k2_grid, dtype=float)
    if k2_grid.ndim != 1 or len(k2_grid) == 0:
        raise DomainError("K2 grid must be a non-empty 1-D array")
    if not np.all(np.isfinite(k2_grid)):
        raise DomainError("K2 grid contains non-finite values")
    if np.any(np.diff(k2_grid) < 0):
        raise DomainError("K2 grid must be sorted in increasing order")
    return k2_grid


def order_table(
    geometry: GratingGeometry,
    beam: BeamState,
    model: DimerModel | None,
    n_max: int,
    normalized: bool = False,
) -> list[DiffractionOrder]:
    """Intensities |t_coh|^2 read at the exact order positions K2_n = 2 pi n / d, n = 0..n_max."""
    orders = []
    for n in range(n_max + 1):
        k2 = geometry.order_wavenumber(n)
        intensity = abs(coherent_amplitude(k2, geometry, beam, model, normalized)) ** 2
        orders.append(DiffractionOrder(n=n, k2=k2, intensity=intensity))
    return orders


def pattern(
    geometry: GratingGeometry,
    beam: BeamState,
    model: DimerModel | None,
    k2_grid: np.ndarray,
    normalized: bool = False,
    max_workers: int = 1,
    verbose: bool = False,
    label: str | None = None,
) -> DiffractionPattern:
    """
    Sample the coherent intensity |t_coh|^2 on `k2_grid` and read the orders 0..n_max with
    n_max = floor(max |K2| d / 2 pi) at their exact positions.

    Parameters
    ----------
    geometry: GratingGeometry
        Grating (period, slit width, number of bars).
    beam: BeamState
        Beam mass and velocity.
    model: DimerModel | None
        Molecular ground-state density, or None for a point particle.
    k2_grid: np.ndarray
        Sorted, finite lateral wavenumbers (nm^-1).
    normalized: bool
        Divide out the velocity prefactor of the bar amplitude.
    max_workers: int
        Number of threads used to evaluate molecular amplitudes.
    verbose: bool
        Print progress information.
    """
    k2_grid = check_k2_grid(k2_grid)
    n_max = int(math.floor(np.max(np.abs(k2_grid)) * geometry.period / (2 * math.pi)))
    label = label if label is not None else ("point" if model is None else "dimer")

    if verbose:
        print(f"computing {label} pattern on {len(k2_grid)} points, orders 0..{n_max}, {max_workers} worker(s)")

    t_bar = _bar_amplitudes(k2_grid, geometry, beam, model, normalized, max_workers=max_workers, progress=verbose)
    intensity = np.abs(t_bar * grating_function(k2_grid, geometry.period, geometry.bar_count)) ** 2

    return DiffractionPattern(
        k2_grid=k2_grid,
        intensity=intensity,
        orders=order_table(geometry, beam, model, n_max, normalized),
        label=label,
    )


def relative_peak_heights(diffraction_pattern: DiffractionPattern, reference_order: int = 1) -> PeakRatios:
    """Order intensities divided by the intensity of `reference_order` (order 1 unless stated)."""
    if len(diffraction_pattern.orders) == 0:
        raise DomainError("pattern has no diffraction orders")

    reference = diffraction_pattern.order_intensity(reference_order)
    strongest = max(order.intensity for order in diffraction_pattern.orders)
    if reference <= ZERO_ORDER_TOLERANCE * strongest:
        raise DomainError(f"reference order {reference_order} has zero intensity")

    return PeakRatios(
        reference_order=reference_order,
        ratios=[(order.n, order.intensity / reference) for order in diffraction_pattern.orders],
    )


def order_intensity_ratios(numerator: DiffractionPattern, denominator: DiffractionPattern) -> list[tuple[int, float]]:
    """
    I_n(numerator) / I_n(denominator) for every order the two patterns share; orders at which the denominator
    vanishes (e.g. even orders of a symmetric point-particle grating) are skipped.
    """
    floor = ZERO_ORDER_TOLERANCE * max((order.intensity for order in denominator.orders), default=0.0)
    ratios = []
    for order in numerator.orders:
        try:
            other = denominator.order_intensity(order.n)
        except DomainError:
            continue
        if other > floor:
            ratios.append((order.n, order.intensity / other))
    return ratios


def effective_grating(geometry: GratingGeometry, delta: float) -> GratingGeometry:
    """
    The grating whose bars are widened by `delta` at fixed period (slit width s - delta): the point-particle
    stand-in for a molecule of lateral extent ~delta at small momentum transfer.
    """
    return geometry.with_changes(slit_width=geometry.slit_width - delta)

"""
Single-bar transition amplitudes.

All amplitudes are returned as Python/numpy complex numbers in internal units (hbar = 1, lengths in nm,
wavenumbers in nm^-1). The overall factor 2 v / (2 pi)^2 (v in m/s) is carried unless `normalized=True`,
in which case it is divided out; only relative intensities |t|^2 are meaningful either way.
"""

from __future__ import annotations

import math

import numpy as np

from molgrating.constants import TRANSVERSE_DENSITY_FLOOR
from molgrating.dataclasses import BarSpec, BeamState
from molgrating.errors import DomainError
from molgrating.models.dimer import DimerModel
from molgrating.utils.quadrature_helpers import checked_quad

# |t_point| below this fraction of its K2 = 0 value counts as a zero of the point amplitude
POINT_ZERO_TOLERANCE = 1e-12


def amplitude_prefactor(beam: BeamState, normalized: bool = False) -> float:
    """2 v / (2 pi)^2, or 1 in normalized mode."""
    return 1.0 if normalized else 2 * beam.velocity / (2 * math.pi) ** 2


def _half_sinc(k2: float | np.ndarray, length: float | np.ndarray) -> float | np.ndarray:
    # sin(K2 L / 2) / K2, with the K2 = 0 limit L / 2 built into np.sinc
    return 0.5 * length * np.sinc(k2 * length / (2 * math.pi))


def point_bar_amplitude(
    k2: float | np.ndarray, bar: BarSpec, beam: BeamState, normalized: bool = False
) -> complex | np.ndarray:
    """
    Amplitude for a point particle of mass M scattered by a single bar of width a:

        t_point(K2) = -(2 i v / (2 pi)^2) sin(K2 a / 2) / K2

    Accepts a scalar or an array of lateral wavenumbers; K2 = 0 gives -(2 i v / (2 pi)^2) a / 2.
    """
    value = -1j * amplitude_prefactor(beam, normalized) * _half_sinc(np.asarray(k2, dtype=float), bar.width)
    return complex(value) if np.ndim(value) == 0 else value


def _edge_integral(k2: float, width: float, model: DimerModel) -> float:
    """
    J(K2) = int_0^a g(x2) sin(K2 (a - x2) / 2) / K2 dx2.

    The logarithmic singularity of g at x2 = 0 is split off: on [0, eps] the smooth factor is frozen at
    its x2 = 0 value and multiplied by the transverse mass up to eps.
    """
    eps = min(TRANSVERSE_DENSITY_FLOOR, width)
    head = model.transverse_mass(eps) * _half_sinc(k2, width)

    scale = model.length_scale
    points = [scale * f for f in (1e-4, 1e-3, 1e-2, 0.1, 1.0, 4.0, 10.0, 40.0)]
    points.extend(eps * 10.0**k for k in range(1, 6))

    tail, _ = checked_quad(
        lambda x: model.transverse_density(x) * _half_sinc(k2, width - x),
        eps,
        width,
        what=f"bar edge integral at K2={k2}",
        points=points,
    )

    return head + tail


def dimer_bar_amplitude(
    k2: float, bar: BarSpec, beam: BeamState, model: DimerModel, normalized: bool = False
) -> complex:
    """
    Elastic single-bar amplitude of a molecule whose internal ground state has density rho = |phi|^2.

        t_mol(K2) = t_point(K2) * 2 F(K2 / 2)
                    + (4 i v / (2 pi)^2) (1 / K2) int_0^a g(x2) sin(K2 (a - x2) / 2) dx2

    where F is the form factor and g the transverse density of `model`. The first term is the point
    amplitude weighted by the probability that both atoms pass the bar's shadow; the second corrects for
    configurations in which the bar edge lies between the atoms (the break-up channel depletes it).

    Parameters
    ----------
    k2: float
        Lateral wavenumber transfer K2 (nm^-1).
    bar: BarSpec
        The bar (width a in nm).
    beam: BeamState
        Total mass and velocity of the molecule.
    model: DimerModel
        Normalized ground-state density.
    normalized: bool
        Divide out the factor 2 v / (2 pi)^2.

    Returns
    -------
    complex
        The amplitude; it is even in K2.
    """
    k2 = abs(float(k2))
    prefactor = amplitude_prefactor(beam, normalized)

    first = point_bar_amplitude(k2, bar, beam, normalized) * 2 * model.form_factor(k2 / 2)
    second = 2j * prefactor * _edge_integral(k2, bar.width, model)

    return complex(first + second)


def dimer_bar_amplitudes(
    k2_grid: np.ndarray, bar: BarSpec, beam: BeamState, model: DimerModel, normalized: bool = False
) -> np.ndarray:
    """dimer_bar_amplitude on every point of a grid, reusing the value at |K2| for -K2."""
    k2_grid = np.asarray(k2_grid, dtype=float)
    cache: dict[float, complex] = {}
    out = np.empty(k2_grid.shape, dtype=complex)
    for idx, k2 in np.ndenumerate(k2_grid):
        key = abs(float(k2))
        if key not in cache:
            cache[key] = dimer_bar_amplitude(key, bar, beam, model, normalized)
        out[idx] = cache[key]
    return out


def breakup_suppression(k2: float, bar: BarSpec, beam: BeamState, model: DimerModel) -> float:
    """
    1 - |t_mol(K2)|^2 / |t_point(K2)|^2: the fraction of the point-particle intensity a molecule loses at K2
    to break-up and its finite size. Negative values mean the molecule scatters more than a point would.
    """
    point = point_bar_amplitude(k2, bar, beam, normalized=True)
    if abs(point) <= POINT_ZERO_TOLERANCE * bar.width / 2:
        raise DomainError(f"point amplitude vanishes at K2={k2} nm^-1; suppression is undefined there")
    dimer = dimer_bar_amplitude(k2, bar, beam, model, normalized=True)
    return 1.0 - abs(dimer) ** 2 / abs(point) ** 2


def point_limit_deviation(
    k2_grid: np.ndarray, bar: BarSpec, beam: BeamState, model: DimerModel
) -> float:
    """
    sup |t_mol - t_point| / sup |t_point| over a grid. A pointwise ratio is not used because t_point has
    zeros at K2 = 2 pi n / a.
    """
    point = point_bar_amplitude(k2_grid, bar, beam, normalized=True)
    dimer = dimer_bar_amplitudes(k2_grid, bar, beam, model, normalized=True)
    return float(np.max(np.abs(dimer - point)) / np.max(np.abs(point)))

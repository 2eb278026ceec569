"""
Brute-force evaluation of the molecular single-bar amplitude by direct quadrature over the three-dimensional
density, without the form-factor and transverse-density reductions used by `dimer_bar_amplitude`. Slow; it
exists to cross-check the reduced implementation.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import integrate

from molgrating.amplitudes.bar import amplitude_prefactor, point_bar_amplitude
from molgrating.dataclasses import BarSpec, BeamState
from molgrating.errors import DomainError, NumericalError
from molgrating.models.dimer import DimerModel

# dblquad tolerances; tighter than the 1e-6 agreement the oracle is used for
ORACLE_EPSABS = 1e-11
ORACLE_EPSREL = 1e-10


def _unit_vectors(lateral_axis: int) -> tuple[np.ndarray, np.ndarray]:
    if lateral_axis not in (0, 1, 2):
        raise DomainError(f"lateral axis must be 0, 1 or 2, got {lateral_axis}")
    lateral = np.zeros(3)
    lateral[lateral_axis] = 1.0
    transverse = np.zeros(3)
    transverse[(lateral_axis + 1) % 3] = 1.0
    return lateral, transverse


def _radial_segments(model: DimerModel, extra: list[float]) -> list[float]:
    scale = model.length_scale
    edges = {0.0, model.support_radius}
    edges.update(scale * f for f in (0.1, 1.0, 4.0, 10.0))
    edges.update(extra)
    return sorted(e for e in edges if 0 <= e <= model.support_radius)


def _dblquad(func, r_lo, r_hi, inner_lo, inner_hi, what: str) -> float:
    value, abserr = integrate.dblquad(func, r_lo, r_hi, inner_lo, inner_hi, epsabs=ORACLE_EPSABS, epsrel=ORACLE_EPSREL)
    if abserr > max(1e-8 * abs(value), 1e-10):
        raise NumericalError(
            f"oracle quadrature for {what} did not converge",
            diagnostics={"interval": (r_lo, r_hi), "value": value, "error_estimate": abserr},
        )
    return value


def dimer_bar_amplitude_oracle(
    k2: float,
    bar: BarSpec,
    beam: BeamState,
    model: DimerModel,
    normalized: bool = False,
    lateral_axis: int = 1,
) -> complex:
    """
    The molecular single-bar amplitude with both integrals done over the full density.

    The shadow term int d^3x 2 e^{i K2 x_lat / 2} rho(x) is integrated in spherical coordinates about the
    lateral axis (the azimuth is trivial); the edge term int d^3x rho(x) sin(K2 (a - x_lat) / 2) / K2 over
    the slab 0 < x_lat < a is integrated in cylindrical coordinates about the same axis, with the cylinder
    radius traded for r. The density is always evaluated at a Cartesian point, so `lateral_axis` selects
    which coordinate plays x2.
    """
    k2 = float(k2)
    a = bar.width
    lateral, transverse = _unit_vectors(lateral_axis)

    def weight_at(r: float, cos_theta: float) -> float:
        sin_theta = math.sqrt(max(0.0, 1.0 - cos_theta**2))
        point = r * (cos_theta * lateral + sin_theta * transverse)
        return r**2 * model.density_at(point)

    # shadow term: 2 pi int dr int du r^2 rho(r, u) cos(K2 r u / 2), times the factor 2
    def shadow_integrand(u: float, r: float) -> float:
        return 2 * math.pi * weight_at(r, u) * math.cos(k2 * r * u / 2)

    edges = _radial_segments(model, extra=[])
    shadow = 0.0
    for r_lo, r_hi in zip(edges[:-1], edges[1:]):
        shadow += _dblquad(shadow_integrand, r_lo, r_hi, -1.0, 1.0, what=f"shadow term at K2={k2}")
    shadow *= 2

    # edge term: outer r, inner x_lat in [0, min(r, a)]; the cylinder radius is sqrt(r^2 - x_lat^2)
    def edge_integrand(x_lat: float, r: float) -> float:
        if r <= 0:
            return 0.0
        return 2 * math.pi * weight_at(r, x_lat / r) / r * 0.5 * (a - x_lat) * np.sinc(k2 * (a - x_lat) / (2 * math.pi))

    edges = _radial_segments(model, extra=[a])
    edge = 0.0
    for r_lo, r_hi in zip(edges[:-1], edges[1:]):
        edge += _dblquad(edge_integrand, r_lo, r_hi, 0.0, lambda r: min(r, a), what=f"edge term at K2={k2}")

    prefactor = amplitude_prefactor(beam, normalized)
    first = point_bar_amplitude(k2, bar, beam, normalized) * shadow
    second = 2j * prefactor * edge

    return complex(first + second)

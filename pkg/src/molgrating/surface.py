"""
Slit transmission for atoms including the van der Waals attraction W_S = -C3 / r^3 to the slit walls.

Model
-----
- Phase-object (eikonal) approximation: an atom crossing the slit at lateral position x on a straight path
  along the beam picks up the phase phi(x) = (1 / hbar v) int_0^t [C3 / r_L^3 + C3 / r_R^3] dz.
- Each wall is an infinite plane. The bar cross-section is a trapeze: the slit has width s at the entrance
  face z = 0 and its half-width grows as s / 2 + z tan(alpha) with depth.
- Atoms whose path comes closer than the cutoff distance to a wall are lost to it; for C3 = 0 the walls do
  not act and the full slit is open.
"""

from __future__ import annotations

import math
import warnings

import numpy as np

from molgrating.dataclasses import BeamState, DiffractionOrder, DiffractionPattern, GratingGeometry, SurfaceSpec
from molgrating.errors import DomainError
from molgrating.grating import check_k2_grid, grating_function
from molgrating.units import hbar_velocity
from molgrating.utils.grid_helpers import evaluate_on_grid
from molgrating.utils.quadrature_helpers import checked_quad

# the transmission integrand oscillates rapidly next to the walls
SURFACE_QUAD_LIMIT = 2000
SURFACE_QUAD_MAX_RELATIVE_ERROR = 1e-6


def _velocity(spec: SurfaceSpec) -> float:
    if spec.velocity is None:
        raise DomainError("surface spec has no velocity; call spec.for_beam(beam) first")
    return spec.velocity


def _tan_cos(spec: SurfaceSpec) -> tuple[float, float]:
    alpha = math.radians(spec.geometry.wedge_angle)
    return math.tan(alpha), math.cos(alpha)


def wall_distances(x: float | np.ndarray, z: float | np.ndarray, spec: SurfaceSpec) -> tuple:
    """Perpendicular distances (nm) of the point (x, z) from the left and right wall planes."""
    tan_a, cos_a = _tan_cos(spec)
    half = spec.geometry.slit_width / 2
    x = np.asarray(x, dtype=float)
    z = np.asarray(z, dtype=float)
    return (half + x + z * tan_a) * cos_a, (half - x + z * tan_a) * cos_a


def open_half_width(spec: SurfaceSpec) -> float:
    """Half-width of the unblocked part of the slit; may be <= 0 if the slit is fully blocked."""
    half = spec.geometry.slit_width / 2
    if spec.c3 == 0:
        return half
    _, cos_a = _tan_cos(spec)
    # the narrowest point of every path is at the entrance face
    return half - spec.cutoff_distance / cos_a


def open_interval(spec: SurfaceSpec) -> tuple[float, float]:
    half = max(open_half_width(spec), 0.0)
    return -half, half


def is_blocked(x: float, spec: SurfaceSpec) -> bool:
    return not abs(x) < open_half_width(spec)


def eikonal_phase(x: float | np.ndarray, spec: SurfaceSpec) -> float | np.ndarray:
    """
    Phase (radians) accumulated by an atom crossing the slit at lateral position x (nm, slit centre at 0).

    With b = s / 2 +- x the entrance distances and c = tan(alpha), each wall contributes

        (C3 / hbar v) t (2 b + c t) / (2 b^2 (b + c t)^2) / cos^3(alpha)

    which for alpha = 0 is (C3 / hbar v) t / b^3.
    """
    x = np.asarray(x, dtype=float)
    half = spec.geometry.slit_width / 2
    if np.any(np.abs(x) >= half):
        raise DomainError(f"lateral position must lie inside the slit (|x| < {half} nm)")

    tan_a, cos_a = _tan_cos(spec)
    depth = spec.geometry.depth
    strength = spec.c3 / hbar_velocity(_velocity(spec)) / cos_a**3

    phase = np.zeros_like(x)
    for b in (half + x, half - x):
        phase = phase + depth * (2 * b + tan_a * depth) / (2 * b**2 * (b + tan_a * depth) ** 2)
    phase = strength * phase

    return float(phase) if phase.ndim == 0 else phase


def transmission(x: float, spec: SurfaceSpec) -> complex:
    """Local transmission function: 0 where the path is blocked, e^{i phi(x)} elsewhere."""
    if is_blocked(x, spec):
        return 0j
    return complex(np.exp(1j * eikonal_phase(x, spec)))


def slit_transmission_amplitude(k2: float, spec: SurfaceSpec) -> complex:
    """
    Aperture amplitude tau(K2) = int_slit e^{i K2 x} e^{i phi(x)} dx over the unblocked part of the slit.

    phi is even in x, so tau = 2 int_0^h cos(K2 x) e^{i phi(x)} dx is even in K2. Without surface interaction
    this is the Fraunhofer slit amplitude s sin(K2 s / 2) / (K2 s / 2).
    """
    k2 = float(k2)
    s = spec.geometry.slit_width
    if spec.c3 == 0:
        return complex(s * np.sinc(k2 * s / (2 * math.pi)))

    half = open_half_width(spec)
    if half <= 0:
        warnings.warn(
            f"slit of width {s} nm is fully blocked at cutoff distance {spec.cutoff_distance} nm", stacklevel=2
        )
        return 0j

    velocity = _velocity(spec)
    # resolve the wall region geometrically; phi grows like 1 / b^3 there
    points = [half - half * 2.0**-k for k in range(1, 30)]

    def part(fn) -> float:
        value, _ = checked_quad(
            fn,
            0.0,
            half,
            what=f"slit transmission at K2={k2} (C3={spec.c3}, v={velocity})",
            points=points,
            limit=SURFACE_QUAD_LIMIT,
            max_relative_error=SURFACE_QUAD_MAX_RELATIVE_ERROR,
        )
        return value

    real = part(lambda x: math.cos(k2 * x) * math.cos(eikonal_phase(x, spec)))
    imag = part(lambda x: math.cos(k2 * x) * math.sin(eikonal_phase(x, spec)))

    return complex(2 * real, 2 * imag)


def atomic_pattern_with_surface(
    geometry: GratingGeometry,
    beam: BeamState,
    spec: SurfaceSpec,
    k2_grid: np.ndarray,
    max_workers: int = 1,
    verbose: bool = False,
) -> DiffractionPattern:
    """
    |tau(K2) sin(N K2 d / 2) / sin(K2 d / 2)|^2 on `k2_grid`, with orders 0..n_max read at K2_n = 2 pi n / d.
    The geometry argument replaces the one stored in `spec`; the velocity defaults to the beam's.
    """
    spec = spec.for_beam(beam).with_changes(geometry=geometry)
    k2_grid = check_k2_grid(k2_grid)
    n_max = int(math.floor(np.max(np.abs(k2_grid)) * geometry.period / (2 * math.pi)))

    if verbose:
        print(f"computing surface pattern (C3={spec.c3} meV nm^3, alpha={geometry.wedge_angle} deg) on {len(k2_grid)} points")

    tau = evaluate_on_grid(
        lambda k: slit_transmission_amplitude(abs(k), spec), k2_grid, max_workers=max_workers, progress=verbose
    )
    intensity = np.abs(tau * grating_function(k2_grid, geometry.period, geometry.bar_count)) ** 2

    orders = []
    for n in range(n_max + 1):
        k2 = geometry.order_wavenumber(n)
        tau_n = slit_transmission_amplitude(k2, spec)
        orders.append(
            DiffractionOrder(n=n, k2=k2, intensity=abs(tau_n * grating_function(k2, geometry.period, geometry.bar_count)) ** 2)
        )

    return DiffractionPattern(k2_grid=k2_grid, intensity=intensity, orders=orders, label=f"atom+surface(C3={spec.c3})")


def order_ratio_with_surface(spec: SurfaceSpec, n: int, reference_order: int = 1) -> float:
    """I_n / I_reference for the aperture amplitude of `spec` (the grating factor N^2 cancels)."""
    geometry = spec.geometry
    reference = abs(slit_transmission_amplitude(geometry.order_wavenumber(reference_order), spec)) ** 2
    if reference == 0:
        raise DomainError(f"reference order {reference_order} has zero intensity")
    return abs(slit_transmission_amplitude(geometry.order_wavenumber(n), spec)) ** 2 / reference


def c3_sweep(
    spec: SurfaceSpec,
    c3_values: list[float],
    n: int = 2,
    reference_order: int = 1,
    verbose: bool = False,
) -> list[tuple[float, float]]:
    """
    I_n / I_reference as a function of C3 at fixed geometry and velocity. The trend is recorded, not assumed:
    the phase and the wall cutoff act in different directions on even orders.
    """
    results = []
    for c3 in c3_values:
        ratio = order_ratio_with_surface(spec.with_changes(c3=c3), n, reference_order)
        if verbose:
            print(f"C3={c3:.6g} meV nm^3: I_{n}/I_{reference_order} = {ratio:.6e}")
        results.append((float(c3), ratio))
    return results


def deviation_from_geometric(
    geometry: GratingGeometry, beam: BeamState, spec: SurfaceSpec, k2_grid: np.ndarray
) -> float:
    """Relative L2 distance || |tau|^2 - |tau_geometric|^2 || / || |tau_geometric|^2 || on a grid."""
    spec = spec.for_beam(beam).with_changes(geometry=geometry)
    geometric = spec.with_changes(c3=0.0)
    k2_grid = check_k2_grid(k2_grid)
    with_surface = np.array([abs(slit_transmission_amplitude(k, spec)) ** 2 for k in k2_grid])
    without = np.array([abs(slit_transmission_amplitude(k, geometric)) ** 2 for k in k2_grid])
    return float(np.linalg.norm(with_surface - without) / np.linalg.norm(without))

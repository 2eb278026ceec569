from __future__ import annotations

import math
from dataclasses import dataclass, field, fields, replace
from typing import Any

import numpy as np

from molgrating.constants import DEFAULT_BAR_COUNT, DEFAULT_DEPTH, DEFAULT_WALL_CUTOFF, DEFAULT_WEDGE_ANGLE
from molgrating.errors import DomainError
from molgrating.units import wavenumber_from_velocity


@dataclass(frozen=True)
class BarSpec:
    """
    Dataclass for a single grating bar. Only its width enters the single-bar amplitudes.
    """

    # bar width a = d - s (nm)
    width: float

    def __post_init__(self):
        if not self.width > 0:
            raise DomainError(f"bar width must be positive, got {self.width} nm")


@dataclass(frozen=True)
class BeamState:
    """
    Dataclass for the incoming beam: total mass M and velocity v = P / M.
    """

    # total mass M of the diffracted particle (amu)
    total_mass: float

    # beam velocity v (m/s)
    velocity: float

    def __post_init__(self):
        if not self.total_mass > 0:
            raise DomainError(f"total mass must be positive, got {self.total_mass} amu")
        if not self.velocity > 0:
            raise DomainError(f"velocity must be positive, got {self.velocity} m/s")

    @property
    def total_wavenumber(self) -> float:
        """P / hbar in nm^-1."""
        return wavenumber_from_velocity(self.total_mass, self.velocity)

    @property
    def wavelength(self) -> float:
        """de Broglie wavelength 2 pi / K in nm."""
        return 2 * math.pi / self.total_wavenumber

    def diffraction_angle(self, k2: float | np.ndarray) -> float | np.ndarray:
        """Small-angle diffraction angle K2 / K (radians) for a lateral wavenumber K2."""
        return k2 / self.total_wavenumber


@dataclass(frozen=True)
class GratingGeometry:
    """
    Dataclass for a transmission grating: N bars of width d - s separated by slits of width s.
    The depth and wedge angle describe the trapeze cross-section and are only used by the surface model.
    """

    # grating period d (nm)
    period: float

    # slit width s (nm); for a wedged bar this is the narrowest opening, at the entrance face
    slit_width: float

    # number of illuminated bars N
    bar_count: int = DEFAULT_BAR_COUNT

    # bar depth t along the beam (nm)
    depth: float = DEFAULT_DEPTH

    # wedge angle alpha of the bar walls off the beam direction (degrees)
    wedge_angle: float = DEFAULT_WEDGE_ANGLE

    def __post_init__(self):
        if not 0 < self.slit_width < self.period:
            raise DomainError(f"need 0 < slit width < period, got s={self.slit_width} nm, d={self.period} nm")
        if int(self.bar_count) != self.bar_count or self.bar_count < 1:
            raise DomainError(f"bar count must be a positive integer, got {self.bar_count}")
        if self.depth < 0:
            raise DomainError(f"depth must be non-negative, got {self.depth} nm")
        if not 0 <= self.wedge_angle < 45:
            raise DomainError(f"wedge angle must lie in [0, 45) degrees, got {self.wedge_angle}")

    @property
    def bar_width(self) -> float:
        return self.period - self.slit_width

    @property
    def bar(self) -> BarSpec:
        return BarSpec(width=self.bar_width)

    @property
    def is_symmetric(self) -> bool:
        return math.isclose(self.slit_width, self.bar_width, rel_tol=1e-12)

    def order_wavenumber(self, n: int) -> float:
        """Lateral wavenumber 2 pi n / d of diffraction order n."""
        return 2 * math.pi * n / self.period

    def with_changes(self, **changes) -> GratingGeometry:
        return replace(self, **changes)


@dataclass(frozen=True)
class SurfaceSpec:
    """
    Dataclass for the van der Waals surface interaction W_S = -C3 / r^3 of an atom with the slit walls.
    """

    # C3 coefficient (meV nm^3)
    c3: float

    # grating geometry; depth and wedge angle shape the walls
    geometry: GratingGeometry

    # beam velocity (m/s); None means "take it from the beam"
    velocity: float | None = None

    # trajectories passing closer than this to a wall are absorbed (nm)
    cutoff_distance: float = DEFAULT_WALL_CUTOFF

    def __post_init__(self):
        if self.c3 < 0:
            raise DomainError(f"C3 must be non-negative, got {self.c3} meV nm^3")
        if not self.cutoff_distance > 0:
            raise DomainError(f"cutoff distance must be positive, got {self.cutoff_distance} nm")
        if self.velocity is not None and not self.velocity > 0:
            raise DomainError(f"velocity must be positive, got {self.velocity} m/s")

    def for_beam(self, beam: BeamState) -> SurfaceSpec:
        """Return a copy whose velocity is the beam velocity (unless one was set explicitly)."""
        return self if self.velocity is not None else replace(self, velocity=beam.velocity)

    def with_changes(self, **changes) -> SurfaceSpec:
        return replace(self, **changes)


@dataclass(frozen=True)
class SizeMeasures:
    """
    Dataclass for the size of a dimer ground state.
    """

    # <r>, the mean interparticle distance (nm)
    mean_r: float

    # <|x2|>, the mean lateral extent along the grating direction (nm)
    mean_abs_x2: float

    @property
    def diameter_estimate(self) -> float:
        """2 <r> (nm)."""
        return 2 * self.mean_r

    def to_json(self) -> dict[str, float]:
        return {"mean_r": self.mean_r, "mean_abs_x2": self.mean_abs_x2, "diameter_estimate": self.diameter_estimate}


@dataclass(frozen=True)
class DiffractionOrder:
    """
    Dataclass for one diffraction order read off at its exact lateral wavenumber.
    """

    # order index n
    n: int

    # K2_n = 2 pi n / d (nm^-1)
    k2: float

    # |t_coh(K2_n)|^2 in relative units
    intensity: float


@dataclass
class DiffractionPattern:
    """
    Dataclass for a sampled coherent diffraction pattern in the diffraction plane (K3 = 0).
    """

    # sampled lateral wavenumbers (nm^-1)
    k2_grid: np.ndarray

    # |t_coh|^2 on the grid
    intensity: np.ndarray

    # orders 0..n_max read at their exact positions
    orders: list[DiffractionOrder] = field(default_factory=list)

    # a short description of what was diffracted ("point", "dimer", "atom+surface")
    label: str = ""

    def order(self, n: int) -> DiffractionOrder:
        for order in self.orders:
            if order.n == n:
                return order
        raise DomainError(f"pattern has no order {n} (orders: {[o.n for o in self.orders]})")

    def order_intensity(self, n: int) -> float:
        return self.order(n).intensity


@dataclass(frozen=True)
class PeakRatios:
    """
    Dataclass for peak heights relative to a reference order.
    """

    # the order whose intensity every ratio is divided by
    reference_order: int

    # (n, I_n / I_reference) pairs in order of n
    ratios: list[tuple[int, float]]

    def __iter__(self):
        return iter(self.ratios)

    def ratio(self, n: int) -> float:
        for order, value in self.ratios:
            if order == n:
                return value
        raise DomainError(f"no ratio for order {n}")


@dataclass(frozen=True)
class EffectiveWidthFit:
    """
    Dataclass for the result of fitting a point-particle bar of width a + delta to a dimer bar of width a.
    """

    # fitted widening delta (nm)
    delta: float

    # value of the least-squares objective at delta
    residual: float

    # the objective relative to the integral of the squared dimer intensity
    relative_residual: float

    # the bar that was fitted
    bar_width: float

    # grid the objective was evaluated on (nm^-1) and the compared curves
    k2_grid: np.ndarray
    dimer_intensity: np.ndarray
    point_intensity: np.ndarray

    # search interval of the minimizer (nm)
    bounds: tuple[float, float]

    @property
    def effective_width(self) -> float:
        return self.bar_width + self.delta


@dataclass
class IdentityReport:
    """
    Dataclass for the outcome of checking the transition-operator identities on one finite model.
    """

    # relative Frobenius residual per identity label
    residuals: dict[str, float]

    # tolerance each residual was compared against (after conditioning adjustment)
    tolerance: float

    # product of the condition numbers of z - H and z - H0 - V
    condition_product: float

    # ||U_VV - T_W|| / ||U_VV||; informational, never part of pass/fail
    truncation_gap: float = math.nan

    @property
    def passed(self) -> dict[str, bool]:
        return {label: residual < self.tolerance for label, residual in self.residuals.items()}

    @property
    def all_passed(self) -> bool:
        return all(self.passed.values())

    @property
    def failures(self) -> list[str]:
        return [label for label, ok in self.passed.items() if not ok]

    def to_json(self) -> dict[str, Any]:
        return {f.name: getattr(self, f.name) for f in fields(self)}

"""
Conversions between SI and the internal unit system, and parsing of unit-suffixed quantities.

Internally hbar = 1: every momentum is stored as a wavenumber in nm^-1. SI values only appear at the
boundary (constants from scipy.constants, user-facing velocities in m/s).
"""

from __future__ import annotations

import math
import re
from enum import Enum

from molgrating.constants import CONSTANTS, NM_IN_M
from molgrating.errors import DomainError


class Dimension(str, Enum):
    """
    Dimension tags the physical kind of a quantity so that unit suffixes can be checked and converted.
    """

    LENGTH = "length"
    WAVENUMBER = "wavenumber"
    MASS = "mass"
    ENERGY = "energy"
    VELOCITY = "velocity"
    ANGLE = "angle"
    C3 = "c3"
    DIMENSIONLESS = "dimensionless"


# factor converting one unit of the given dimension into the internal unit
UNIT_FACTORS: dict[Dimension, dict[str, float]] = {
    Dimension.LENGTH: {"nm": 1.0, "m": 1e9, "um": 1e3, "angstrom": 0.1, "A": 0.1},
    Dimension.WAVENUMBER: {"nm^-1": 1.0, "1/nm": 1.0, "m^-1": 1e-9, "1/m": 1e-9, "A^-1": 10.0, "1/A": 10.0},
    Dimension.MASS: {"amu": 1.0, "u": 1.0, "Da": 1.0, "kg": 1.0 / CONSTANTS.amu_in_kg},
    Dimension.ENERGY: {"ueV": 1.0, "neV": 1e-3, "meV": 1e3, "eV": 1e6, "J": 1.0 / CONSTANTS.ueV_in_J},
    Dimension.VELOCITY: {"m/s": 1.0, "km/s": 1e3},
    Dimension.ANGLE: {"deg": 1.0, "rad": 180.0 / math.pi},
    Dimension.C3: {"meV nm^3": 1.0, "meV*nm^3": 1.0, "eV A^3": 1.0, "eV*A^3": 1.0},
    Dimension.DIMENSIONLESS: {"": 1.0},
}

# internal unit of each dimension, used when formatting quantities back to text
INTERNAL_UNITS: dict[Dimension, str] = {
    Dimension.LENGTH: "nm",
    Dimension.WAVENUMBER: "nm^-1",
    Dimension.MASS: "amu",
    Dimension.ENERGY: "ueV",
    Dimension.VELOCITY: "m/s",
    Dimension.ANGLE: "deg",
    Dimension.C3: "meV nm^3",
    Dimension.DIMENSIONLESS: "",
}

# factor converting the internal unit of a dimension into SI
SI_FACTORS: dict[Dimension, float] = {
    Dimension.LENGTH: NM_IN_M,
    Dimension.WAVENUMBER: 1.0 / NM_IN_M,
    Dimension.MASS: CONSTANTS.amu_in_kg,
    Dimension.ENERGY: CONSTANTS.ueV_in_J,
    Dimension.VELOCITY: 1.0,
    Dimension.ANGLE: math.pi / 180.0,
    Dimension.C3: CONSTANTS.meV_in_J * NM_IN_M**3,
    Dimension.DIMENSIONLESS: 1.0,
}

_QUANTITY_RE = re.compile(r"^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*(.*?)\s*$")


def to_si(value: float, dimension: Dimension) -> float:
    """Convert a value in internal units to SI."""
    return value * SI_FACTORS[dimension]


def from_si(value: float, dimension: Dimension) -> float:
    """Convert an SI value to internal units."""
    return value / SI_FACTORS[dimension]


def parse_quantity(text: str | float | int, dimension: Dimension) -> float:
    """
    Parse a unit-suffixed quantity such as "50 nm" or "0.11 ueV" and return it in internal units.

    Bare numbers are only accepted for dimensionless quantities.

    Parameters
    ----------
    text: str | float | int
        The quantity as written in a config file.
    dimension: Dimension
        The dimension the quantity must have.

    Returns
    -------
    float
        The value converted to the internal unit of `dimension`.
    """
    if isinstance(text, bool):
        raise DomainError(f"expected a {dimension.value} quantity, got a boolean")

    if isinstance(text, (int, float)):
        if dimension != Dimension.DIMENSIONLESS:
            raise DomainError(f"{dimension.value} quantity {text!r} needs a unit, e.g. '{text} {INTERNAL_UNITS[dimension]}'")
        return float(text)

    match = _QUANTITY_RE.match(str(text))
    if match is None:
        raise DomainError(f"cannot parse quantity {text!r}")

    number, unit = match.groups()
    unit = " ".join(unit.split())
    factors = UNIT_FACTORS[dimension]
    if unit not in factors:
        known = ", ".join(repr(u) for u in factors)
        raise DomainError(f"unit {unit!r} is not a {dimension.value} unit (known: {known})")

    return float(number) * factors[unit]


def format_quantity(value: float, dimension: Dimension) -> str:
    """Format an internal-unit value as a unit-suffixed string that parse_quantity reads back."""
    unit = INTERNAL_UNITS[dimension]
    return f"{value:.12g} {unit}".strip()


def kappa_from_binding(binding_energy: float, constituent_mass: float) -> float:
    """
    Decay constant kappa = sqrt(2 mu |E_b|) / hbar of a two-body bound state, in nm^-1.

    The two constituents have equal mass m, so the reduced mass is mu = m / 2.

    Parameters
    ----------
    binding_energy: float
        Magnitude of the binding energy (ueV). Zero is the zero-energy limit and returns 0.
    constituent_mass: float
        Mass of one constituent (amu).
    """
    if binding_energy < 0:
        raise DomainError(f"binding energy magnitude must be non-negative, got {binding_energy} ueV")
    if constituent_mass <= 0:
        raise DomainError(f"constituent mass must be positive, got {constituent_mass} amu")

    reduced_mass = to_si(constituent_mass, Dimension.MASS) / 2.0
    energy = to_si(binding_energy, Dimension.ENERGY)
    kappa_si = math.sqrt(2.0 * reduced_mass * energy) / CONSTANTS.hbar

    return from_si(kappa_si, Dimension.WAVENUMBER)


def binding_from_kappa(kappa: float, constituent_mass: float) -> float:
    """Inverse of kappa_from_binding: the binding-energy magnitude (ueV) for a decay constant kappa (nm^-1)."""
    if kappa < 0:
        raise DomainError(f"kappa must be non-negative, got {kappa} nm^-1")
    if constituent_mass <= 0:
        raise DomainError(f"constituent mass must be positive, got {constituent_mass} amu")

    reduced_mass = to_si(constituent_mass, Dimension.MASS) / 2.0
    kappa_si = to_si(kappa, Dimension.WAVENUMBER)
    energy = (CONSTANTS.hbar * kappa_si) ** 2 / (2.0 * reduced_mass)

    return from_si(energy, Dimension.ENERGY)


def wavenumber_from_velocity(mass: float, velocity: float) -> float:
    """Total wavenumber K = M v / hbar (nm^-1) of a particle of mass M (amu) moving at v (m/s)."""
    if mass <= 0 or velocity <= 0:
        raise DomainError(f"mass and velocity must be positive, got {mass} amu and {velocity} m/s")
    momentum = to_si(mass, Dimension.MASS) * velocity
    return from_si(momentum / CONSTANTS.hbar, Dimension.WAVENUMBER)


def velocity_from_wavenumber(mass: float, wavenumber: float) -> float:
    """Inverse of wavenumber_from_velocity."""
    if mass <= 0 or wavenumber <= 0:
        raise DomainError(f"mass and wavenumber must be positive, got {mass} amu and {wavenumber} nm^-1")
    momentum = CONSTANTS.hbar * to_si(wavenumber, Dimension.WAVENUMBER)
    return momentum / to_si(mass, Dimension.MASS)


def hbar_velocity(velocity: float) -> float:
    """hbar * v in meV nm, the scale that turns a path integral of a potential (meV nm) into a phase."""
    if velocity <= 0:
        raise DomainError(f"velocity must be positive, got {velocity} m/s")
    return CONSTANTS.hbar * velocity / CONSTANTS.meV_in_J / NM_IN_M

from __future__ import annotations

import math

import numpy as np
from scipy import special

from molgrating.constants import (
    CONSTANTS,
    HE2_BINDING_ENERGY,
    HE2_MEAN_ABS_X2,
    SUPPORT_DECAY_LENGTHS,
    TRANSVERSE_DENSITY_FLOOR,
)
from molgrating.dataclasses import SizeMeasures
from molgrating.errors import DomainError
from molgrating.models.dimer import DimerModel
from molgrating.units import binding_from_kappa, kappa_from_binding


class ExponentialModel(DimerModel):
    """
    Zero-range (halo) ground state rho(r) = (kappa / 2 pi) e^{-2 kappa r} / r^2, exactly normalized.

    This is the universal asymptotic form of a very weakly bound s-wave state, and it has closed forms for
    every reduced quantity:

    - <r> = 1 / (2 kappa), <|x2|> = 1 / (4 kappa)
    - F(q) = (2 kappa / q) arctan(q / (2 kappa))
    - g(x2) = kappa E1(2 kappa |x2|)
    """

    def __init__(self, kappa: float, binding_energy: float | None = None, label: str = ""):
        if not kappa > 0 or not math.isfinite(kappa):
            raise DomainError(f"kappa must be positive and finite, got {kappa} nm^-1")
        super().__init__(binding_energy=binding_energy, label=label or f"exponential(kappa={kappa:.6g} nm^-1)")
        self.kappa = float(kappa)

    def __eq__(self, other) -> bool:
        return isinstance(other, ExponentialModel) and self.kappa == other.kappa

    def __hash__(self):
        return hash((self.__class__.__name__, self.kappa))

    def get_model_params(self) -> dict:
        return {"kind": "exponential", "kappa": self.kappa, "binding_energy": self.binding_energy, "label": self.label}

    def radial_weight(self, r: float | np.ndarray) -> float | np.ndarray:
        return self.kappa / (2 * math.pi) * np.exp(-2 * self.kappa * np.asarray(r, dtype=float))

    @property
    def support_radius(self) -> float:
        return SUPPORT_DECAY_LENGTHS / (2 * self.kappa)

    @property
    def length_scale(self) -> float:
        return 1 / (2 * self.kappa)

    def norm(self) -> float:
        return 1.0

    def size_measures(self) -> SizeMeasures:
        mean_r = 1 / (2 * self.kappa)
        return SizeMeasures(mean_r=mean_r, mean_abs_x2=mean_r / 2)

    def form_factor(self, q: float) -> float:
        u = abs(float(q)) / (2 * self.kappa)
        if u < 1e-4:
            # arctan(u) / u series
            return 1 - u**2 / 3 + u**4 / 5
        return math.atan(u) / u

    def transverse_density(self, x2: float) -> float:
        y = 2 * self.kappa * max(abs(float(x2)), TRANSVERSE_DENSITY_FLOOR)
        return self.kappa * float(special.exp1(y))

    def transverse_mass(self, upper: float) -> float:
        # int_0^y E1(t) dt = y E1(y) + 1 - e^{-y}
        y = 2 * self.kappa * abs(float(upper))
        if y == 0:
            return 0.0
        return 0.5 * (y * float(special.exp1(y)) - math.expm1(-y))

    def sine_transform(self, q: float) -> float:
        """int_0^inf g(x2) sin(q x2) dx2 = kappa ln(1 + (q / 2 kappa)^2) / (2 q)."""
        q = float(q)
        if q == 0:
            return 0.0
        return self.kappa * math.log1p((q / (2 * self.kappa)) ** 2) / (2 * q)


def exponential_model(kappa: float, binding_energy: float | None = None, label: str = "") -> ExponentialModel:
    """Halo model with a given decay constant kappa (nm^-1); the binding energy is carried as metadata."""
    return ExponentialModel(kappa=kappa, binding_energy=binding_energy, label=label)


def calibrate_to_x2(target_x2: float = HE2_MEAN_ABS_X2, constituent_mass: float = CONSTANTS.helium4_mass) -> ExponentialModel:
    """
    Halo model whose <|x2|> equals `target_x2` (nm), i.e. kappa = 1 / (4 target_x2).

    The binding energy attached as metadata is the one implied by kappa for the given constituent mass.
    """
    if not target_x2 > 0:
        raise DomainError(f"target <|x2|> must be positive, got {target_x2} nm")
    kappa = 1 / (4 * target_x2)
    return ExponentialModel(
        kappa=kappa,
        binding_energy=binding_from_kappa(kappa, constituent_mass),
        label=f"calibrated(<|x2|>={target_x2:.6g} nm)",
    )


def exponential_from_binding(
    binding_energy: float = HE2_BINDING_ENERGY, constituent_mass: float = CONSTANTS.helium4_mass
) -> ExponentialModel:
    """Halo model with kappa = sqrt(2 mu |E_b|) / hbar for two constituents of mass `constituent_mass` (amu)."""
    kappa = kappa_from_binding(binding_energy, constituent_mass)
    if kappa == 0:
        raise DomainError("a zero binding energy gives an unbound (infinitely large) state")
    return ExponentialModel(
        kappa=kappa, binding_energy=binding_energy, label=f"binding(|E_b|={binding_energy:.6g} ueV)"
    )

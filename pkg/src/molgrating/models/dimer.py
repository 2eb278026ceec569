from __future__ import annotations

import math

import numpy as np

from molgrating.constants import NORMALIZATION_TOLERANCE, TRANSVERSE_DENSITY_FLOOR
from molgrating.dataclasses import SizeMeasures
from molgrating.errors import ValidationError
from molgrating.utils.quadrature_helpers import checked_quad


class DimerModel:
    """
    Isotropic ground-state probability density rho(r) = |phi(x)|^2 of a diatomic molecule, together with the
    reduced one-dimensional quantities the single-bar amplitude consumes:

    - the form factor F(q) = int e^{i q . x} rho(x) d^3x
    - the transverse (marginal) density g(x2) = int int rho(x1, x2, x3) dx1 dx3

    Subclasses must implement `radial_weight` (r^2 rho(r), which stays finite as r -> 0) and `support_radius`.
    The generic implementations of the reduced quantities below use radial quadrature; subclasses with closed
    forms override them.
    """

    def __init__(self, binding_energy: float | None = None, label: str = ""):
        self.binding_energy = binding_energy
        self.label = label

    def __str__(self):
        return f"{self.__class__.__name__}({self.label or 'unnamed'})"

    def get_model_params(self) -> dict:
        """Parameters identifying the model; echoed into result metadata."""
        raise NotImplementedError("Calling get_model_params on abstract method")

    def radial_weight(self, r: float | np.ndarray) -> float | np.ndarray:
        """r^2 rho(r) in nm^-1."""
        raise NotImplementedError("Calling radial_weight on abstract method")

    @property
    def support_radius(self) -> float:
        """Radius (nm) beyond which the density is treated as zero by quadratures."""
        raise NotImplementedError("Calling support_radius on abstract method")

    @property
    def length_scale(self) -> float:
        """Characteristic size (nm) used to place quadrature break points."""
        return self.size_measures().mean_r

    def density(self, r: float | np.ndarray) -> float | np.ndarray:
        """rho(r) in nm^-3; diverges like 1/r^2 at the origin for halo states."""
        r = np.asarray(r, dtype=float)
        with np.errstate(divide="ignore"):
            value = self.radial_weight(r) / r**2
        return float(value) if value.ndim == 0 else value

    def density_at(self, x: np.ndarray) -> float:
        """rho evaluated at a Cartesian point x (nm); depends only on |x|."""
        return self.density(float(np.linalg.norm(x)))

    def norm(self) -> float:
        """int rho d^3x, which must be 1."""
        value, _ = checked_quad(
            lambda r: 4 * math.pi * self.radial_weight(r),
            0.0,
            self.support_radius,
            what="normalization",
            points=self._break_points(),
        )
        return value

    def check_normalized(self) -> None:
        norm = self.norm()
        if abs(norm - 1.0) > NORMALIZATION_TOLERANCE:
            raise ValidationError(f"{self} is not normalized: int rho d^3x = {norm:.9f}")

    def size_measures(self) -> SizeMeasures:
        """
        <r> by radial quadrature. For any isotropic density <|x2|> = <r> <|cos theta|> = <r> / 2.
        """
        mean_r, _ = checked_quad(
            lambda r: 4 * math.pi * r * self.radial_weight(r),
            0.0,
            self.support_radius,
            what="<r>",
        )
        return SizeMeasures(mean_r=mean_r, mean_abs_x2=mean_r / 2)

    def form_factor(self, q: float) -> float:
        """F(q) = int 4 pi r^2 rho(r) sin(q r) / (q r) dr; F(0) = 1, real and even in q."""
        q = abs(float(q))
        value, _ = checked_quad(
            lambda r: 4 * math.pi * self.radial_weight(r) * np.sinc(q * r / math.pi),
            0.0,
            self.support_radius,
            what=f"form factor at q={q}",
            points=self._break_points(q),
        )
        return value

    def transverse_density(self, x2: float) -> float:
        """g(x2) = 2 pi int_{|x2|}^inf r rho(r) dr, evaluated at |x2| >= TRANSVERSE_DENSITY_FLOOR."""
        lower = max(abs(float(x2)), TRANSVERSE_DENSITY_FLOOR)
        if lower >= self.support_radius:
            return 0.0
        value, _ = checked_quad(
            lambda r: 2 * math.pi * self.radial_weight(r) / r,
            lower,
            self.support_radius,
            what=f"transverse density at x2={x2}",
            points=[lower * 10, *self._break_points()],
        )
        return value

    def transverse_mass(self, upper: float) -> float:
        """int_0^upper g(x2) dx2 = 2 pi int r rho(r) min(r, upper) dr (Fubini; no singularity)."""
        upper = abs(float(upper))
        value, _ = checked_quad(
            lambda r: 2 * math.pi * self.radial_weight(r) * min(r, upper) / r,
            0.0,
            self.support_radius,
            what=f"transverse mass up to {upper}",
            points=[upper, *self._break_points()],
        )
        return value

    def _break_points(self, q: float = 0.0) -> list[float]:
        scale = self.length_scale
        points = [scale * f for f in (0.01, 0.1, 1.0, 4.0, 10.0)]
        if q > 0:
            points.extend(np.arange(1, 50) * 2 * math.pi / q)
        return [p for p in points if p < self.support_radius]

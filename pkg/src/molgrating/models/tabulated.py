from __future__ import annotations

import math
import os

import numpy as np
from scipy.interpolate import CubicSpline

from molgrating.constants import NORMALIZATION_TOLERANCE
from molgrating.errors import ValidationError
from molgrating.models.dimer import DimerModel


class TabulatedModel(DimerModel):
    """
    Isotropic density given on a radial grid r_i > 0 (nm) with values rho_i (nm^-3).

    The finite radial weight w(r) = r^2 rho(r) is interpolated with a cubic spline; below the first grid
    point w is held at w(r_0), beyond the last grid point the density is zero. The model must be normalized
    to within NORMALIZATION_TOLERANCE.
    """

    def __init__(
        self,
        r: np.ndarray,
        density: np.ndarray,
        binding_energy: float | None = None,
        label: str = "",
        source: str | None = None,
    ):
        r = np.asarray(r, dtype=float)
        density = np.asarray(density, dtype=float)

        if r.ndim != 1 or r.shape != density.shape:
            raise ValidationError(f"radial grid and density must be 1-D arrays of equal length, got {r.shape} and {density.shape}")
        if len(r) < 4:
            raise ValidationError(f"a tabulated density needs at least 4 grid points, got {len(r)}")
        if not np.all(np.isfinite(r)) or not np.all(np.isfinite(density)):
            raise ValidationError("tabulated density contains non-finite values")
        if r[0] <= 0:
            raise ValidationError(f"radial grid must start at r > 0, got r_0 = {r[0]} nm")
        if np.any(np.diff(r) <= 0):
            raise ValidationError("radial grid must be strictly increasing")
        if np.any(density < 0):
            raise ValidationError("tabulated density must be non-negative")

        super().__init__(binding_energy=binding_energy, label=label or f"tabulated({len(r)} points)")
        self.r = r
        self.values = density
        self.source = source
        self._spline = CubicSpline(r, r**2 * density)

        # mass inside r_0 with w held constant, plus the spline integral over the grid
        self._norm = 4 * math.pi * (self._spline(r[0]) * r[0] + self._spline.integrate(r[0], r[-1]))
        if abs(self._norm - 1.0) > NORMALIZATION_TOLERANCE:
            raise ValidationError(f"tabulated density is not normalized: int rho d^3x = {self._norm:.9f}")

        self._length_scale = None

    def get_model_params(self) -> dict:
        return {
            "kind": "tabulated",
            "points": int(len(self.r)),
            "r_min": float(self.r[0]),
            "r_max": float(self.r[-1]),
            "source": self.source,
            "binding_energy": self.binding_energy,
            "label": self.label,
        }

    def radial_weight(self, r: float | np.ndarray) -> float | np.ndarray:
        r_arr = np.asarray(r, dtype=float)
        inside = np.clip(r_arr, self.r[0], self.r[-1])
        weight = np.where(r_arr > self.r[-1], 0.0, np.maximum(self._spline(inside), 0.0))
        return float(weight) if weight.ndim == 0 else weight

    @property
    def support_radius(self) -> float:
        return float(self.r[-1])

    @property
    def length_scale(self) -> float:
        if self._length_scale is None:
            self._length_scale = self.size_measures().mean_r
        return self._length_scale

    def norm(self) -> float:
        return float(self._norm)

    @classmethod
    def from_model(cls, model: DimerModel, r: np.ndarray | None = None, points: int = 8000) -> TabulatedModel:
        """Tabulate another model on `r` (default: a geometric grid from 1e-6 nm to its support radius)."""
        if r is None:
            r = np.geomspace(1e-6, model.support_radius, points)
        return cls(
            r=r,
            density=model.density(r),
            binding_energy=model.binding_energy,
            label=f"tabulated copy of {model.label}",
        )


def load_tabulated(path: str, binding_energy: float | None = None, label: str = "") -> TabulatedModel:
    """
    Read a two-column text file (r in nm, rho in nm^-3; lines starting with '#' are comments).
    """
    if not os.path.isfile(path):
        raise ValidationError(f"density file {path} does not exist")

    try:
        data = np.loadtxt(path, comments="#", ndmin=2)
    except ValueError as e:
        raise ValidationError(f"cannot parse density file {path}: {e}") from e

    if data.shape[1] != 2:
        raise ValidationError(f"density file {path} must have exactly two columns, found {data.shape[1]}")

    return TabulatedModel(
        r=data[:, 0],
        density=data[:, 1],
        binding_energy=binding_energy,
        label=label or os.path.basename(path),
        source=os.path.abspath(path),
    )


def save_tabulated(model: DimerModel, path: str, r: np.ndarray | None = None) -> None:
    """Write a model in the two-column format read by load_tabulated."""
    if r is None:
        r = np.geomspace(1e-6, model.support_radius, 8000)
    header = f"{model.label}\nr [nm]  rho [nm^-3]"
    np.savetxt(path, np.column_stack([r, model.density(r)]), header=header, comments="# ", fmt="%.15e")

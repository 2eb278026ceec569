"""
Finite-dimensional checks of the transition-operator algebra behind the molecular amplitudes.

Hermitian matrices stand in for the free Hamiltonian H0, the binding potential V between the constituents
and the external (grating) potential W = W1 + W2 acting on them; z is a complex spectral parameter off the
real axis, so every resolvent exists. All relations below are exact matrix identities and are checked to
round-off.

    G0 = (z - H0)^-1    GV = (z - H0 - V)^-1    GW = (z - H0 - W)^-1    G = (z - H0 - V - W)^-1

    G = GV + GV U_VV GV            G = GW U_WV GV            U_0V = G0^-1 G GV^-1
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg as la

from molgrating.constants import CONDITION_LIMIT, CONDITION_REFERENCE, RESIDUAL_FLOOR
from molgrating.dataclasses import IdentityReport
from molgrating.errors import DomainError, NumericalError

# matrices must be Hermitian to this relative accuracy
HERMITIAN_TOLERANCE = 1e-12

# default tolerance for identity residuals on well-conditioned models
DEFAULT_IDENTITY_TOLERANCE = 1e-10

# labels of the identities checked by verify_identities
IDENTITY_LABELS = (
    "vv_definition",
    "wv_definition",
    "lippmann_schwinger",
    "vv_from_wv",
    "t_matrix_propagation",
    "first_coupled",
    "second_coupled",
    "decoupled",
    "breakup",
)


def _is_hermitian(matrix: np.ndarray) -> bool:
    scale = max(1.0, float(np.max(np.abs(matrix)))) if matrix.size else 1.0
    return bool(np.max(np.abs(matrix - matrix.conj().T), initial=0.0) <= HERMITIAN_TOLERANCE * scale)


@dataclass(frozen=True)
class FiniteModel:
    """
    Dataclass for a finite-dimensional stand-in of the three-body problem.
    """

    # free Hamiltonian
    h0: np.ndarray

    # binding potential between the two constituents
    v: np.ndarray

    # external potential acting on constituent 1 and on constituent 2; W = W1 + W2
    w1: np.ndarray
    w2: np.ndarray

    # complex spectral parameter, Im z != 0
    z: complex

    def __post_init__(self):
        shape = np.shape(self.h0)
        if len(shape) != 2 or shape[0] != shape[1] or shape[0] < 1:
            raise DomainError(f"H0 must be a non-empty square matrix, got shape {shape}")
        for name in ("h0", "v", "w1", "w2"):
            matrix = getattr(self, name)
            if np.shape(matrix) != shape:
                raise DomainError(f"{name} has shape {np.shape(matrix)}, expected {shape}")
            if not np.all(np.isfinite(matrix)):
                raise DomainError(f"{name} contains non-finite entries")
            if not _is_hermitian(np.asarray(matrix)):
                raise DomainError(f"{name} is not Hermitian")
        if complex(self.z).imag == 0:
            raise DomainError(f"spectral parameter must lie off the real axis, got z={self.z}")

    @property
    def dim(self) -> int:
        return int(np.shape(self.h0)[0])

    @property
    def w(self) -> np.ndarray:
        return self.w1 + self.w2

    @property
    def identity(self) -> np.ndarray:
        return np.eye(self.dim, dtype=complex)

    def scaled(self, factor: float) -> FiniteModel:
        """(H0, V, W, z) -> (factor H0, factor V, factor W, factor z)."""
        return FiniteModel(
            h0=factor * self.h0, v=factor * self.v, w1=factor * self.w1, w2=factor * self.w2, z=factor * self.z
        )

    def with_binding_scaled(self, factor: float) -> FiniteModel:
        """The same model with V replaced by factor * V."""
        return FiniteModel(h0=self.h0, v=factor * self.v, w1=self.w1, w2=self.w2, z=self.z)

    def conjugate(self) -> FiniteModel:
        """The same model at the complex-conjugate spectral parameter."""
        return FiniteModel(h0=self.h0, v=self.v, w1=self.w1, w2=self.w2, z=complex(self.z).conjugate())


def _random_hermitian(rng: np.random.Generator, dim: int) -> np.ndarray:
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return (a + a.conj().T) / (2 * math.sqrt(dim))


def random_model(
    seed: int,
    dim: int = 8,
    energy: float | None = None,
    imag: float | None = None,
    zero_w: bool = False,
    zero_v: bool = False,
) -> FiniteModel:
    """
    Reproducible random model: H0, V, W1 and W2 have complex Gaussian entries, are Hermitized and scaled by
    1 / sqrt(dim) so that their spectra stay O(1); z = E + i Im with E uniform in [-1, 1] and Im uniform in
    [0.1, 2] unless given.
    """
    if dim < 1:
        raise DomainError(f"dimension must be positive, got {dim}")
    rng = np.random.default_rng(seed)
    h0, v, w1, w2 = (_random_hermitian(rng, dim) for _ in range(4))
    energy = rng.uniform(-1.0, 1.0) if energy is None else energy
    imag = rng.uniform(0.1, 2.0) if imag is None else imag

    zeros = np.zeros((dim, dim), dtype=complex)
    return FiniteModel(
        h0=h0,
        v=zeros if zero_v else v,
        w1=zeros if zero_w else w1,
        w2=zeros if zero_w else w2,
        z=complex(energy, imag),
    )


def inverse_resolvent(z: complex, hamiltonian: np.ndarray) -> np.ndarray:
    """z - H; exact, no inversion involved."""
    return z * np.eye(hamiltonian.shape[0], dtype=complex) - hamiltonian


def _resolvent(z: complex, hamiltonian: np.ndarray, name: str) -> tuple[np.ndarray, float]:
    matrix = inverse_resolvent(z, hamiltonian)
    condition = float(np.linalg.cond(matrix))
    if not condition < CONDITION_LIMIT:
        raise NumericalError(f"resolvent {name} is ill-conditioned", diagnostics={"z": z, "condition": condition})
    return la.solve(matrix, np.eye(matrix.shape[0], dtype=complex)), condition


@dataclass(frozen=True)
class Resolvents:
    """
    Dataclass for the four Green's operators of a finite model; unpacks as (G0, G, GV, GW).
    """

    g0: np.ndarray
    g: np.ndarray
    gv: np.ndarray
    gw: np.ndarray

    # condition numbers of z - H for each resolvent, keyed by name
    condition: dict[str, float]

    def __iter__(self):
        return iter((self.g0, self.g, self.gv, self.gw))

    @property
    def condition_product(self) -> float:
        """cond(z - H) * cond(z - H0 - V): the amplification of round-off in U_VV."""
        return self.condition["G"] * self.condition["GV"]


def _hamiltonians(model: FiniteModel) -> dict[str, np.ndarray]:
    # H is assembled as (H0 + V) + W so that W = 0 reproduces H0 + V bit for bit
    h_v = model.h0 + model.v
    return {"G0": model.h0, "G": h_v + model.w, "GV": h_v, "GW": model.h0 + model.w}


def resolvents(model: FiniteModel) -> Resolvents:
    """
    Green's operators G0, G, GV and GW of `model`.

    Raises
    ------
    NumericalError
        If any z - H has condition number above CONDITION_LIMIT.
    """
    solved, condition = {}, {}
    for name, hamiltonian in _hamiltonians(model).items():
        solved[name], condition[name] = _resolvent(model.z, hamiltonian, name)
    return Resolvents(g0=solved["G0"], g=solved["G"], gv=solved["GV"], gw=solved["GW"], condition=condition)


def t_matrix(h0: np.ndarray, x: np.ndarray, z: complex) -> np.ndarray:
    """T_X = X + X G_X X with G_X = (z - H0 - X)^-1."""
    g_x, _ = _resolvent(z, h0 + x, "G_X")
    return x + x @ g_x @ x


def scalar_t_matrix(h: complex, x: complex, z: complex) -> complex:
    """The 1 x 1 T-matrix in closed form, x + x^2 / (z - h - x)."""
    return x + x**2 / (z - h - x)


def u_vv_from_definition(model: FiniteModel) -> np.ndarray:
    """U_VV = GV^-1 (G - GV) GV^-1."""
    res = resolvents(model)
    gv_inv = inverse_resolvent(model.z, model.h0 + model.v)
    return gv_inv @ (res.g - res.gv) @ gv_inv


def u_wv_from_definition(model: FiniteModel) -> np.ndarray:
    """U_WV = GW^-1 G GV^-1."""
    res = resolvents(model)
    gw_inv = inverse_resolvent(model.z, model.h0 + model.w)
    gv_inv = inverse_resolvent(model.z, model.h0 + model.v)
    return gw_inv @ res.g @ gv_inv


def breakup_operator(model: FiniteModel) -> np.ndarray:
    """Break-up transition operator U_0V = G0^-1 G GV^-1."""
    res = resolvents(model)
    g0_inv = inverse_resolvent(model.z, model.h0)
    gv_inv = inverse_resolvent(model.z, model.h0 + model.v)
    return g0_inv @ res.g @ gv_inv


def relative_residual(lhs: np.ndarray, rhs: np.ndarray) -> float:
    """||lhs - rhs||_F / max(||rhs||_F, RESIDUAL_FLOOR)."""
    return float(la.norm(lhs - rhs) / max(la.norm(rhs), RESIDUAL_FLOOR))


def _operators(model: FiniteModel) -> dict[str, np.ndarray]:
    res = resolvents(model)
    z, h0, v, w = model.z, model.h0, model.v, model.w
    gv_inv = inverse_resolvent(z, h0 + v)
    gw_inv = inverse_resolvent(z, h0 + w)
    g0_inv = inverse_resolvent(z, h0)
    return {
        "G0": res.g0,
        "G": res.g,
        "GV": res.gv,
        "GW": res.gw,
        "G0_inv": g0_inv,
        "T_V": v + v @ res.gv @ v,
        "T_W": w + w @ res.gw @ w,
        "U_VV": gv_inv @ (res.g - res.gv) @ gv_inv,
        "U_WV": gw_inv @ res.g @ gv_inv,
        "U_0V": g0_inv @ res.g @ gv_inv,
        "condition_product": res.condition_product,
    }


def _gaps(ops: dict[str, np.ndarray]) -> tuple[float, float]:
    norm = la.norm(ops["U_VV"])
    if norm == 0:
        return math.nan, math.nan
    u_vv, t_w, t_v, g0 = ops["U_VV"], ops["T_W"], ops["T_V"], ops["G0"]
    first_iteration = t_w + t_w @ g0 @ t_v @ g0 @ t_w
    return float(la.norm(u_vv - t_w) / norm), float(la.norm(u_vv - first_iteration) / norm)


def verify_identities(model: FiniteModel, tol: float = DEFAULT_IDENTITY_TOLERANCE) -> IdentityReport:
    """
    Relative residuals of the operator identities on `model`:

    - vv_definition:        G = GV + GV U_VV GV
    - wv_definition:        G = GW U_WV GV
    - lippmann_schwinger:   T_W = W + W G0 T_W and T_V = V + V G0 T_V (the larger residual)
    - vv_from_wv:           U_VV = W GW U_WV
    - t_matrix_propagation: T_W G0 = W GW
    - first_coupled:        U_VV = T_W G0 U_WV
    - second_coupled:       U_WV = G0^-1 + T_V G0 U_VV
    - decoupled:            U_VV = T_W + T_W G0 T_V G0 U_VV
    - breakup:              G0^-1 + (1 + T_V G0) U_VV = G0^-1 G GV^-1

    The comparison tolerance is `tol` times max(1, condition product / CONDITION_REFERENCE). For 1 x 1 models
    the T-matrices are also compared with their closed form (label scalar_t_matrix).
    """
    ops = _operators(model)
    g0, g, gv, gw = ops["G0"], ops["G"], ops["GV"], ops["GW"]
    t_v, t_w, u_vv, u_wv = ops["T_V"], ops["T_W"], ops["U_VV"], ops["U_WV"]
    v, w = model.v, model.w
    one = model.identity

    residuals = {
        "vv_definition": relative_residual(gv + gv @ u_vv @ gv, g),
        "wv_definition": relative_residual(gw @ u_wv @ gv, g),
        "lippmann_schwinger": max(
            relative_residual(w + w @ g0 @ t_w, t_w),
            relative_residual(v + v @ g0 @ t_v, t_v),
        ),
        "vv_from_wv": relative_residual(w @ gw @ u_wv, u_vv),
        "t_matrix_propagation": relative_residual(t_w @ g0, w @ gw),
        "first_coupled": relative_residual(t_w @ g0 @ u_wv, u_vv),
        "second_coupled": relative_residual(ops["G0_inv"] + t_v @ g0 @ u_vv, u_wv),
        "decoupled": relative_residual(t_w + t_w @ g0 @ t_v @ g0 @ u_vv, u_vv),
        "breakup": relative_residual(ops["G0_inv"] + (one + t_v @ g0) @ u_vv, ops["U_0V"]),
    }

    if model.dim == 1:
        h, z = model.h0[0, 0], model.z
        closed = np.array([[scalar_t_matrix(h, v[0, 0], z)], [scalar_t_matrix(h, w[0, 0], z)]])
        residuals["scalar_t_matrix"] = relative_residual(np.array([[t_v[0, 0]], [t_w[0, 0]]]), closed)

    condition_product = ops["condition_product"]
    gap, _ = _gaps(ops)

    return IdentityReport(
        residuals=residuals,
        tolerance=tol * max(1.0, condition_product / CONDITION_REFERENCE),
        condition_product=condition_product,
        truncation_gap=gap,
    )


def truncation_gap(model: FiniteModel) -> tuple[float, float]:
    """
    How far U_VV is from its lowest-order approximation T_W, and from the first iterate of the decoupled
    equation:

        ( ||U_VV - T_W|| / ||U_VV||,  ||U_VV - (T_W + T_W G0 T_V G0 T_W)|| / ||U_VV|| )

    Both are nan (with a warning) when U_VV = 0, e.g. for W = 0.
    """
    gaps = _gaps(_operators(model))
    if math.isnan(gaps[0]):
        warnings.warn("U_VV vanishes; the truncation gap is undefined", stacklevel=2)
    return gaps


def scaling_slope(model: FiniteModel, factors: list[float] | None = None) -> tuple[float, float]:
    """
    Log-log slopes of both truncation gaps against the scale of V, fitted over `factors`
    (default 1e-1 .. 1e-4). Lowest order gives slope 1, the first iterate slope 2.
    """
    factors = factors if factors is not None else [1e-1, 1e-2, 1e-3, 1e-4]
    gaps = np.array([truncation_gap(model.with_binding_scaled(f)) for f in factors])
    log_f = np.log10(factors)
    slope0 = np.polyfit(log_f, np.log10(gaps[:, 0]), 1)[0]
    slope1 = np.polyfit(log_f, np.log10(gaps[:, 1]), 1)[0]
    return float(slope0), float(slope1)


def seed_dimension(seed: int) -> int:
    """Dimension used for a seed when none is fixed: cycles through 4..16."""
    return 4 + seed % 13


def verify_many(
    seeds: list[int], dim: int | None = None, tol: float = DEFAULT_IDENTITY_TOLERANCE
) -> list[tuple[int, int, IdentityReport]]:
    """verify_identities on random_model(seed, dim) for every seed; dim None cycles through 4..16."""
    results = []
    for seed in seeds:
        model_dim = dim if dim is not None else seed_dimension(seed)
        results.append((seed, model_dim, verify_identities(random_model(seed, model_dim), tol)))
    return results

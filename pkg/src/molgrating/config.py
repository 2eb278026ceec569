from __future__ import annotations

import copy
import os
from enum import Enum
from typing import Any

import numpy as np
import yaml

from molgrating.constants import (
    CONSTANTS,
    DEFAULT_BAR_COUNT,
    DEFAULT_C3,
    DEFAULT_DEPTH,
    DEFAULT_VELOCITY,
    DEFAULT_WALL_CUTOFF,
    DEFAULT_WEDGE_ANGLE,
    HE2_BINDING_ENERGY,
    HE2_MASS,
    HE2_MEAN_ABS_X2,
    Calibration,
    DimerKind,
)
from molgrating.dataclasses import BeamState, GratingGeometry, SurfaceSpec
from molgrating.errors import ConfigError, MolGratingError
from molgrating.models import (
    DimerModel,
    calibrate_to_x2,
    exponential_from_binding,
    exponential_model,
    load_tabulated,
)
from molgrating.units import Dimension, format_quantity, parse_quantity

# directory holding the packaged figure-reproduction configs
CONFIG_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), "configs")

# section -> key -> (kind, default); kind is a Dimension for unit-suffixed quantities, or one of
# int / bool / str / a str Enum; a default of None means "required" unless the section itself is optional
SCHEMA: dict[str, dict[str, tuple[Any, Any]]] = {
    "grating": {
        "period": (Dimension.LENGTH, None),
        "slit_width": (Dimension.LENGTH, None),
        "bar_count": (int, DEFAULT_BAR_COUNT),
        "depth": (Dimension.LENGTH, f"{DEFAULT_DEPTH} nm"),
        "wedge_angle": (Dimension.ANGLE, f"{DEFAULT_WEDGE_ANGLE} deg"),
    },
    "beam": {
        "mass": (Dimension.MASS, f"{HE2_MASS} amu"),
        "velocity": (Dimension.VELOCITY, f"{DEFAULT_VELOCITY} m/s"),
    },
    "dimer": {
        "kind": (DimerKind, DimerKind.EXPONENTIAL.value),
        "calibration": (Calibration, Calibration.MEAN_ABS_X2.value),
        "mean_abs_x2": (Dimension.LENGTH, f"{HE2_MEAN_ABS_X2} nm"),
        "binding_energy": (Dimension.ENERGY, f"{HE2_BINDING_ENERGY} ueV"),
        "kappa": (Dimension.WAVENUMBER, ""),
        "constituent_mass": (Dimension.MASS, f"{CONSTANTS.helium4_mass} amu"),
        "path": (str, ""),
    },
    "surface": {
        "c3": (Dimension.C3, f"{DEFAULT_C3} meV nm^3"),
        "cutoff_distance": (Dimension.LENGTH, f"{DEFAULT_WALL_CUTOFF} nm"),
    },
    "grid": {
        "k2_min": (Dimension.WAVENUMBER, "0 nm^-1"),
        "k2_max": (Dimension.WAVENUMBER, "1 nm^-1"),
        "k2_samples": (int, 401),
        "fit_k2_max": (Dimension.WAVENUMBER, "0.15 nm^-1"),
        "fit_samples": (int, 301),
    },
    "output": {
        "directory": (str, "."),
        "normalized": (bool, False),
        "max_workers": (int, 1),
    },
}

OPTIONAL_SECTIONS = ("surface",)


def _key_lines(text: str) -> dict[str, int]:
    """Map 'section.key' (and 'section') to the 1-based line it is written on."""
    lines = {}
    try:
        root = yaml.compose(text, Loader=yaml.SafeLoader)
    except yaml.YAMLError:
        return lines
    if not isinstance(root, yaml.MappingNode):
        return lines
    for section_node, body in root.value:
        section = section_node.value
        lines[section] = section_node.start_mark.line + 1
        if isinstance(body, yaml.MappingNode):
            for key_node, _ in body.value:
                lines[f"{section}.{key_node.value}"] = key_node.start_mark.line + 1
    return lines


class RunConfig:
    """
    A validated run configuration read from YAML. Physical quantities carry unit suffixes
    (e.g. `period: 50 nm`) and are stored in internal units; `get("section.key")` returns them.
    """

    def __init__(self, raw: dict | None = None, source: str = "<defaults>", key_lines: dict[str, int] | None = None):
        self.source = source
        self.key_lines = key_lines if key_lines is not None else {}
        self.raw = copy.deepcopy(raw) if raw is not None else {}
        self.config = self._validate(self.raw)

    @classmethod
    def from_text(cls, text: str, source: str = "<string>") -> RunConfig:
        try:
            raw = yaml.safe_load(text)
        except yaml.YAMLError as e:
            mark = getattr(e, "problem_mark", None)
            where = f" at line {mark.line + 1}" if mark is not None else ""
            raise ConfigError(f"{source}: invalid YAML{where}: {getattr(e, 'problem', e)}") from e

        if raw is None:
            raw = {}
        if not isinstance(raw, dict):
            raise ConfigError(f"{source}: top level must be a mapping of sections")

        return cls(raw, source=source, key_lines=_key_lines(text))

    @classmethod
    def from_file(cls, path: str) -> RunConfig:
        if not os.path.isfile(path):
            raise ConfigError(f"config file {path} does not exist")
        with open(path) as f:
            return cls.from_text(f.read(), source=path)

    @classmethod
    def from_name(cls, name: str) -> RunConfig:
        """Load one of the packaged configs (e.g. 'he2_grating', 'he2_width_fit')."""
        path = os.path.join(CONFIG_DIR, f"{name}.yaml")
        if not os.path.isfile(path):
            known = sorted(f[: -len(".yaml")] for f in os.listdir(CONFIG_DIR) if f.endswith(".yaml"))
            raise ConfigError(f"no packaged config named {name!r} (known: {', '.join(known)})")
        return cls.from_file(path)

    def _where(self, key: str) -> str:
        line = self.key_lines.get(key)
        return f"{self.source}:{line}" if line is not None else self.source

    def _parse_value(self, key: str, kind: Any, value: Any) -> Any:
        try:
            if isinstance(kind, Dimension):
                if value == "":
                    return None
                return parse_quantity(value, kind)
            if kind is bool:
                if not isinstance(value, bool):
                    raise ConfigError(f"expected true or false, got {value!r}")
                return value
            if kind is int:
                if isinstance(value, bool) or not isinstance(value, int):
                    raise ConfigError(f"expected an integer, got {value!r}")
                return value
            if kind is str:
                return str(value)
            return kind(value)
        except (MolGratingError, ValueError) as e:
            raise ConfigError(f"{self._where(key)}: invalid value for {key}: {e}") from e

    def _validate(self, raw: dict) -> dict[str, Any]:
        unknown = sorted(set(raw) - set(SCHEMA))
        if unknown:
            raise ConfigError(f"{self._where(unknown[0])}: unknown section(s) {unknown}")

        resolved = {}
        for section, keys in SCHEMA.items():
            body = raw.get(section)
            if body is None:
                if section in OPTIONAL_SECTIONS:
                    continue
                body = {}
            if not isinstance(body, dict):
                raise ConfigError(f"{self._where(section)}: section {section} must be a mapping")

            unknown = sorted(set(body) - set(keys))
            if unknown:
                key = f"{section}.{unknown[0]}"
                raise ConfigError(f"{self._where(key)}: unknown key {key} (known: {', '.join(keys)})")

            for name, (kind, default) in keys.items():
                key = f"{section}.{name}"
                value = body.get(name, default)
                if value is None:
                    raise ConfigError(f"{self._where(section)}: missing required key {key}")
                resolved[key] = self._parse_value(key, kind, value)

        if resolved["grid.k2_samples"] < 2:
            raise ConfigError(f"{self._where('grid.k2_samples')}: grid.k2_samples must be at least 2")
        if not resolved["grid.k2_min"] < resolved["grid.k2_max"]:
            raise ConfigError(f"{self._where('grid.k2_max')}: need grid.k2_min < grid.k2_max")
        if resolved["output.max_workers"] < 1:
            raise ConfigError(f"{self._where('output.max_workers')}: output.max_workers must be at least 1")

        # build the physical objects once so that their own invariants are checked at load time
        self.config = resolved
        try:
            self.grating()
            self.beam()
            if resolved["dimer.kind"] == DimerKind.EXPONENTIAL:
                self.dimer_model()
            self.surface_spec()
        except MolGratingError as e:
            raise ConfigError(f"{self.source}: {e}") from e

        return resolved

    def get(self, key: str, default: Any = None) -> Any:
        return self.config.get(key, default)

    @property
    def has_surface(self) -> bool:
        return "surface.c3" in self.config

    def with_overrides(self, overrides: dict[str, Any]) -> RunConfig:
        """A new config with raw values replaced; keys are 'section.key', values written as in YAML."""
        raw = copy.deepcopy(self.raw)
        for key, value in overrides.items():
            section, _, name = key.partition(".")
            raw.setdefault(section, {})
            if raw[section] is None:
                raw[section] = {}
            raw[section][name] = value
        return RunConfig(raw, source=self.source, key_lines=self.key_lines)

    def grating(self) -> GratingGeometry:
        return GratingGeometry(
            period=self.config["grating.period"],
            slit_width=self.config["grating.slit_width"],
            bar_count=self.config["grating.bar_count"],
            depth=self.config["grating.depth"],
            wedge_angle=self.config["grating.wedge_angle"],
        )

    def beam(self) -> BeamState:
        return BeamState(total_mass=self.config["beam.mass"], velocity=self.config["beam.velocity"])

    def dimer_model(self) -> DimerModel:
        kind = self.config["dimer.kind"]
        if kind == DimerKind.TABULATED:
            path = self.config["dimer.path"]
            if not path:
                raise ConfigError(f"{self._where('dimer.path')}: dimer.path is required for a tabulated model")
            if not os.path.isabs(path) and os.path.isfile(self.source):
                path = os.path.join(os.path.dirname(os.path.abspath(self.source)), path)
            return load_tabulated(path, binding_energy=self.config["dimer.binding_energy"])

        calibration = self.config["dimer.calibration"]
        if calibration == Calibration.MEAN_ABS_X2:
            return calibrate_to_x2(self.config["dimer.mean_abs_x2"], self.config["dimer.constituent_mass"])
        if calibration == Calibration.BINDING_ENERGY:
            return exponential_from_binding(self.config["dimer.binding_energy"], self.config["dimer.constituent_mass"])

        kappa = self.config["dimer.kappa"]
        if kappa is None:
            raise ConfigError(f"{self._where('dimer.calibration')}: calibration 'kappa' needs dimer.kappa")
        return exponential_model(kappa)

    def surface_spec(self) -> SurfaceSpec | None:
        if not self.has_surface:
            return None
        return SurfaceSpec(
            c3=self.config["surface.c3"],
            geometry=self.grating(),
            velocity=self.config["beam.velocity"],
            cutoff_distance=self.config["surface.cutoff_distance"],
        )

    def k2_grid(self) -> np.ndarray:
        return np.linspace(self.config["grid.k2_min"], self.config["grid.k2_max"], self.config["grid.k2_samples"])

    def resolved(self) -> dict[str, dict[str, Any]]:
        """The full configuration, defaults filled in, in a form `from_text` reads back unchanged."""
        echo: dict[str, dict[str, Any]] = {}
        for key, value in self.config.items():
            section, _, name = key.partition(".")
            kind = SCHEMA[section][name][0]
            if isinstance(kind, Dimension):
                value = "" if value is None else format_quantity(value, kind)
            elif isinstance(kind, type) and issubclass(kind, Enum):
                value = value.value
            echo.setdefault(section, {})[name] = value
        return echo

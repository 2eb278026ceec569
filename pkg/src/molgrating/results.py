from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Any

import numpy as np
import pandas as pd
import scipy
import yaml

from molgrating.constants import CSV_FLOAT_FORMAT
from molgrating.errors import ValidationError

METADATA_SUFFIX = ".meta.yaml"


def _plain(value: Any) -> Any:
    """Convert numpy scalars/arrays and tuples into plain YAML-safe Python values."""
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return [_plain(v) for v in value.tolist()]
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, complex):
        return {"re": value.real, "im": value.imag}
    return value


def library_versions() -> dict[str, str]:
    from molgrating import __version__

    return {"molgrating": __version__, "numpy": np.__version__, "scipy": scipy.__version__, "pandas": pd.__version__}


@dataclass
class ResultTable:
    """
    A table of results (a K2 curve or an order table) together with the metadata needed to reproduce it.

    Written as CSV whose leading '#' lines carry the metadata as YAML, plus a `<name>.meta.yaml` sidecar
    with the same metadata. Nothing time-dependent is recorded, so identical runs give identical files.
    """

    # the tabular data
    data: pd.DataFrame

    # config echo, versions, seeds, command and any command-specific summary values
    metadata: dict[str, Any] = field(default_factory=dict)

    @property
    def columns(self) -> list[str]:
        return list(self.data.columns)

    def __len__(self) -> int:
        return len(self.data)

    def _metadata_block(self) -> dict[str, Any]:
        block = _plain(self.metadata)
        block["columns"] = self.columns
        block["rows"] = len(self.data)
        return block

    def write(self, path: str) -> str:
        """Write `path` (CSV) and its sidecar; returns the sidecar path."""
        directory = os.path.dirname(os.path.abspath(path))
        os.makedirs(directory, exist_ok=True)

        header = yaml.safe_dump(self._metadata_block(), sort_keys=True, default_flow_style=False)
        with open(path, "w", newline="") as f:
            for line in header.splitlines():
                f.write(f"# {line}\n")
            self.data.to_csv(f, index=False, float_format=CSV_FLOAT_FORMAT, lineterminator="\n")

        sidecar = path + METADATA_SUFFIX
        with open(sidecar, "w") as f:
            yaml.safe_dump(self._metadata_block(), f, sort_keys=True, default_flow_style=False)

        return sidecar


def read_header(path: str) -> dict[str, Any]:
    """Metadata embedded in the '#' header of a CSV written by ResultTable.write."""
    lines = []
    with open(path) as f:
        for line in f:
            if not line.startswith("#"):
                break
            lines.append(line[2:] if line.startswith("# ") else line[1:])
    return yaml.safe_load("".join(lines)) or {}


def load_result(path: str) -> ResultTable:
    """Read back a CSV and its sidecar; the two metadata copies must agree."""
    if not os.path.isfile(path):
        raise ValidationError(f"result file {path} does not exist")

    data = pd.read_csv(path, comment="#")
    embedded = read_header(path)

    sidecar = path + METADATA_SUFFIX
    if os.path.isfile(sidecar):
        with open(sidecar) as f:
            metadata = yaml.safe_load(f) or {}
        if metadata != embedded:
            raise ValidationError(f"metadata in {path} and {sidecar} disagree")
    else:
        metadata = embedded

    if metadata.get("rows") != len(data):
        raise ValidationError(f"{path} has {len(data)} rows but its metadata records {metadata.get('rows')}")

    metadata = {k: v for k, v in metadata.items() if k not in ("columns", "rows")}
    return ResultTable(data=data, metadata=metadata)

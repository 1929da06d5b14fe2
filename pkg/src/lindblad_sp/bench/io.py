"""Config loading and CSV output."""

from __future__ import annotations

import csv
import io
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from ..errors import BadParameter
from ..schemes import SchemeId
from .zoo import ModelSpec


def fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.17g}"
    return str(value)


def write_csv(path: "str | Path | None", header: Sequence[str], rows: Iterable[Sequence]) -> str:
    """Write rows with 17 significant digits; ``path=None`` writes to stdout."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) for v in row])
    text = buf.getvalue()
    if path is None or str(path) == "-":
        sys.stdout.write(text)
    else:
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        Path(path).write_text(text, encoding="utf-8")
    return text


@dataclass
class ExperimentConfig:
    model: ModelSpec
    schemes: list = field(default_factory=lambda: ["sp1"])
    T: float = 1.0
    N_values: list = field(default_factory=lambda: [16, 32, 64, 128])
    n_samples: int = 20
    seed: int = 0
    output: str | None = None
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if isinstance(self.model, dict):
            self.model = ModelSpec.from_dict(self.model)
        self.schemes = [SchemeId.parse(s) for s in self.schemes]
        if not self.T > 0:
            raise BadParameter(f"T must be positive, got {self.T}")
        if not self.N_values or min(self.N_values) < 1:
            raise BadParameter("all N values must be >= 1")
        if self.n_samples < 1:
            raise BadParameter("n_samples must be >= 1")

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        data = dict(data)
        if "model" not in data:
            raise BadParameter("config needs a 'model' entry")
        known = {"model", "schemes", "T", "N_values", "n_samples", "seed", "output"}
        extra = {k: data.pop(k) for k in list(data) if k not in known}
        if "N" in extra and "N_values" not in data:
            data["N_values"] = [int(extra["N"])]
        return cls(**data, extra=extra)


def load_config(path: "str | Path") -> ExperimentConfig:
    with open(path, encoding="utf-8") as fh:
        return ExperimentConfig.from_dict(json.load(fh))

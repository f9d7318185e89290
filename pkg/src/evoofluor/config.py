"""Run configuration: defaults < key=value config file < command line."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, fields
from pathlib import Path

from .errors import ValidationError
from .learn import ALGORITHMS
from .uvparams import Criterion, DeltaKFormula
from .validate import parse_protocols


def parse_seed_list(text):
    """``"0-24"``, ``"1,5,9"`` or a mix such as ``"0-4,10"``."""
    seeds = []
    for part in str(text).split(","):
        part = part.strip()
        if not part:
            continue
        if "-" in part:
            lo, hi = (int(v) for v in part.split("-"))
            seeds.extend(range(lo, hi + 1))
        else:
            seeds.append(int(part))
    if not seeds:
        raise ValidationError("empty seed list")
    return seeds


@dataclass
class RunConfig:
    eem: str = ""
    uv: str = ""
    out: str = "out"
    criterion: str = "k268"
    dk_formula: str = "as-printed"
    lambda1: float = 480.0
    lambda2: float = 300.0
    protocols: str = "1:4-8"
    algorithm: str = "adaboost"
    seed_list: str = "0-24"
    population: str = "oil"
    positive_class: int = 0
    force: bool = False

    def __post_init__(self):
        self.criterion = Criterion.parse(self.criterion).value
        self.dk_formula = DeltaKFormula.parse(self.dk_formula).value
        self.lambda1 = float(self.lambda1)
        self.lambda2 = float(self.lambda2)
        self.positive_class = int(self.positive_class)
        if isinstance(self.force, str):
            self.force = self.force.strip().lower() in ("1", "true", "yes", "on")
        if self.algorithm not in ALGORITHMS:
            raise ValidationError(f"unknown algorithm {self.algorithm!r}")
        if self.population not in ("oil", "replicate"):
            raise ValidationError(f"unknown population {self.population!r}")
        if self.positive_class not in (0, 1):
            raise ValidationError("positive_class must be 0 or 1")
        parse_protocols(self.protocols)
        parse_seed_list(self.seed_list)

    @property
    def seeds(self):
        return parse_seed_list(self.seed_list)

    @property
    def protocol_list(self):
        return parse_protocols(self.protocols)

    @property
    def lambdas(self):
        return (self.lambda1, self.lambda2)

    def as_dict(self):
        return asdict(self)


KEYS = {f.name for f in fields(RunConfig)}


def read_config_file(path):
    """Read ``key = value`` lines (``#`` comments), or the config block of a run manifest."""
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    if path.suffix == ".json":
        doc = json.loads(text)
        values = doc.get("config", doc)
        return {k: v for k, v in values.items() if k in KEYS}
    values = {}
    for n, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValidationError(f"{path}:{n}: expected key=value")
        k, v = (s.strip() for s in line.split("=", 1))
        k = k.replace("-", "_")
        if k not in KEYS:
            raise ValidationError(f"{path}:{n}: unknown key {k!r}")
        values[k] = v
    return values


def read_key_values(path):
    """Plain key=value reader without key validation (used for synth spec files)."""
    values = {}
    for n, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValidationError(f"{path}:{n}: expected key=value")
        k, v = (s.strip() for s in line.split("=", 1))
        values[k] = v
    return values


def build_config(cli_values, config_path=None):
    values = read_config_file(config_path) if config_path else {}
    values.update({k: v for k, v in cli_values.items() if v is not None and k in KEYS})
    return RunConfig(**values)

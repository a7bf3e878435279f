"""Experiment configuration: defaults, config-file loading, CLI overrides."""
from __future__ import annotations

import configparser
import json
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path

from ..models.config import VARIANTS

SECTION = "experiment"


@dataclass(frozen=True)
class ExperimentConfig:
    qubit_counts: tuple[int, ...] = (2, 4, 6)
    gate_counts: tuple[int, ...] = (16, 24, 32)
    circuits_per_size: int = 300
    train_fraction: float = 0.9
    runs_per_model: int = 3
    variants: tuple[str, ...] = VARIANTS
    coupling_map: str = "heavy-hex-12"
    opt: int = 1
    seed: int = 0
    workdir: str = "."
    # model and training
    hidden_dim: int = 128
    latent_dim: int = 32
    gcn_rounds: int = 3
    epochs: int = 100
    batch_size: int = 32
    learning_rate: float = 1e-3
    beta: float = 0.005
    # evaluation and search
    n_enc: int = 3
    n_dec: int = 3
    mse_tol: float = 0.01
    noise_scale: float = 0.5
    samples: int = 100

    def __post_init__(self):
        for name in ("circuits_per_size", "runs_per_model", "hidden_dim", "latent_dim", "epochs",
                     "batch_size", "n_enc", "n_dec", "samples"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        if not self.qubit_counts or min(self.qubit_counts) < 1:
            raise ValueError("qubit_counts must be positive")
        if not self.gate_counts or min(self.gate_counts) < 1:
            raise ValueError("gate_counts must be positive")
        if not 0.0 < self.train_fraction < 1.0:
            raise ValueError("train_fraction must lie strictly between 0 and 1")
        if self.n_test < 1 or self.n_train < 1:
            raise ValueError("split leaves an empty train or test set")
        if self.opt not in (0, 1):
            raise ValueError("opt must be 0 or 1")
        if not self.variants or any(v not in VARIANTS for v in self.variants):
            raise ValueError(f"variants must be drawn from {VARIANTS}")
        if self.learning_rate <= 0 or self.beta < 0 or self.mse_tol < 0 or self.noise_scale < 0:
            raise ValueError("learning_rate must be positive; beta, mse_tol, noise_scale non-negative")

    @property
    def n_train(self) -> int:
        return int(round(self.circuits_per_size * self.train_fraction))

    @property
    def n_test(self) -> int:
        return self.circuits_per_size - self.n_train

    @property
    def sizes(self) -> list[tuple[int, int]]:
        return [(n, g) for n in self.qubit_counts for g in self.gate_counts]

    def to_dict(self) -> dict:
        return asdict(self)


_TUPLES = {"qubit_counts": int, "gate_counts": int, "variants": str}


def _coerce(name: str, raw, kind):
    if name in _TUPLES:
        item = _TUPLES[name]
        if isinstance(raw, str):
            try:
                raw = json.loads(raw)
            except json.JSONDecodeError:
                raw = [p for p in raw.replace(",", " ").split()]
        if not isinstance(raw, (list, tuple)):
            raw = [raw]
        return tuple(item(v) for v in raw)
    if isinstance(raw, str):
        raw = raw.strip()
        try:
            raw = json.loads(raw)
        except json.JSONDecodeError:
            pass
    if kind is int:
        if isinstance(raw, float) and not raw.is_integer():
            raise ValueError(f"{name} must be an integer, got {raw}")
        return int(raw)
    if kind is float:
        return float(raw)
    return str(raw)


_KINDS = {"int": int, "float": float, "str": str}


def _field_kinds() -> dict:
    return {f.name: _KINDS.get(f.type if isinstance(f.type, str) else f.type.__name__, str) for f in fields(ExperimentConfig)}


def read_config_file(path: str | Path) -> dict:
    """Key-value pairs from an INI file, or a section-less ``key = value`` file."""
    text = Path(path).read_text()
    parser = configparser.ConfigParser()
    try:
        parser.read_string(text)
    except configparser.MissingSectionHeaderError:
        parser.read_string(f"[{SECTION}]\n{text}")
    values = {}
    for section in parser.sections():
        values.update(parser[section])
    return {k.replace("-", "_"): v for k, v in values.items()}


def build_config(path: str | Path | None = None, **overrides) -> ExperimentConfig:
    """Defaults, then the config file, then non-None ``overrides``."""
    kinds = _field_kinds()
    values = {}
    merged = dict(read_config_file(path)) if path else {}
    merged.update({k: v for k, v in overrides.items() if v is not None})
    for key, raw in merged.items():
        if key not in kinds:
            raise ValueError(f"unknown config key {key!r}")
        values[key] = _coerce(key, raw, kinds[key])
    return replace(ExperimentConfig(), **values)

"""Experiment commands: dataset generation, training, evaluation, baseline."""
from __future__ import annotations

import csv
import json
import logging
import math
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from ..circuit import QuantumCircuit, load_circuit, random_circuit
from ..exceptions import MissingCheckpoint, ZeroOriginal
from ..models import ModelConfig, load_checkpoint, save_checkpoint
from ..search import Target, reconstruct, search_report
from ..simulator import circuit_mse, density_matrix, density_mse
from ..training import TrainConfig, train
from ..transpiler import logical_state, reduction_pct, transpile
from .config import ExperimentConfig

log = logging.getLogger(__name__)

CSV_HEADER = ["variant", "qubits", "gates", "run", "circuit", "candidate", "gate_red_pct", "depth_red_pct", "density_mse"]
BASELINE_VARIANT = "baseline"


@dataclass(frozen=True)
class ResultRow:
    variant: str
    qubits: int
    gates: int
    run: int
    circuit: str
    candidate: int
    gate_red_pct: float
    depth_red_pct: float
    density_mse: float

    def as_list(self) -> list:
        return [self.variant, self.qubits, self.gates, self.run, self.circuit, self.candidate,
                repr(self.gate_red_pct), repr(self.depth_red_pct), repr(self.density_mse)]


def size_name(n: int, g: int) -> str:
    return f"q{n}_g{g}"


def data_dir(cfg: ExperimentConfig, n: int, g: int) -> Path:
    return Path(cfg.workdir) / "data" / size_name(n, g)


def checkpoint_dir(cfg: ExperimentConfig, variant: str, n: int, g: int, run: int) -> Path:
    return Path(cfg.workdir) / "checkpoints" / variant / size_name(n, g) / f"run{run}"


def results_dir(cfg: ExperimentConfig) -> Path:
    return Path(cfg.workdir) / "results"


def derive_seed(*parts: int) -> int:
    """Stable 32-bit seed from integer parts."""
    return int(np.random.SeedSequence([int(p) for p in parts]).generate_state(1)[0])


def safe_reduction(original: int, new: int) -> float:
    try:
        return reduction_pct(original, new)
    except ZeroOriginal:
        return 0.0 if new == 0 else -math.inf


def write_csv(path: Path, rows) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for r in rows:
            w.writerow(r.as_list())
    return path


def read_csv(path: Path) -> list[ResultRow]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != CSV_HEADER:
            raise ValueError(f"{path}: unexpected CSV header {header}")
        return [
            ResultRow(r[0], int(r[1]), int(r[2]), int(r[3]), r[4], int(r[5]), float(r[6]), float(r[7]), float(r[8]))
            for r in reader
        ]


def _dump_json(path: Path, payload) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


# generate ---------------------------------------------------------------

def cmd_generate(cfg: ExperimentConfig) -> list[Path]:
    """Write circuits and a fixed train/test split for every size."""
    written = []
    for n, g in cfg.sizes:
        d = data_dir(cfg, n, g)
        d.mkdir(parents=True, exist_ok=True)
        names = []
        for i in range(cfg.circuits_per_size):
            name = f"circuit_{i:03d}"
            c = random_circuit(n, g, derive_seed(cfg.seed, n, g, i))
            (d / f"{name}.txt").write_text(c.to_text())
            names.append(name)
        order = np.random.default_rng(derive_seed(cfg.seed, n, g, 1_000_003)).permutation(len(names))
        split = {
            "train": sorted(names[i] for i in order[: cfg.n_train]),
            "test": sorted(names[i] for i in order[cfg.n_train :]),
        }
        _dump_json(d / "split.json", split)
        written.append(d)
    log.info("generated %d sizes", len(written))
    return written


def load_split(cfg: ExperimentConfig, n: int, g: int) -> tuple[list[tuple[str, QuantumCircuit]], list[tuple[str, QuantumCircuit]]]:
    d = data_dir(cfg, n, g)
    path = d / "split.json"
    if not path.exists():
        raise FileNotFoundError(f"no dataset at {d}; run generate first")
    split = json.loads(path.read_text())
    load = lambda names: [(name, load_circuit(d / f"{name}.txt")) for name in names]  # noqa: E731
    return load(split["train"]), load(split["test"])


# train ------------------------------------------------------------------

def _model_config(cfg: ExperimentConfig, variant: str) -> ModelConfig:
    return ModelConfig(variant=variant, hidden_dim=cfg.hidden_dim, latent_dim=cfg.latent_dim, gcn_rounds=cfg.gcn_rounds)


def cmd_train(cfg: ExperimentConfig) -> list[Path]:
    out = []
    for variant in cfg.variants:
        for n, g in cfg.sizes:
            train_set, _ = load_split(cfg, n, g)
            circuits = [c for _, c in train_set]
            for run in range(cfg.runs_per_model):
                tc = TrainConfig(
                    epochs=cfg.epochs,
                    batch_size=cfg.batch_size,
                    learning_rate=cfg.learning_rate,
                    beta=cfg.beta,
                    seed=derive_seed(cfg.seed, n, g, run, 7),
                    model_variant=variant,
                )
                result = train(circuits, tc, _model_config(cfg, variant))
                d = checkpoint_dir(cfg, variant, n, g, run)
                save_checkpoint(result.model, d, {"loss_history": result.history["loss"], "train": asdict(tc)})
                log.info("trained %s %s run %d: final loss %.4f", variant, size_name(n, g), run, result.history["loss"][-1])
                out.append(d)
    return out


# eval -------------------------------------------------------------------

def cmd_eval(cfg: ExperimentConfig) -> Path:
    """Nine reconstructions per test circuit per run; CSV plus JSON reports."""
    target = Target(cfg.coupling_map, cfg.opt)
    rows: list[ResultRow] = []
    reports = results_dir(cfg) / "reports"
    for variant in cfg.variants:
        for n, g in cfg.sizes:
            _, test_set = load_split(cfg, n, g)
            for run in range(cfg.runs_per_model):
                model = load_checkpoint(checkpoint_dir(cfg, variant, n, g, run))
                rng = np.random.default_rng(derive_seed(cfg.seed, n, g, run, 11))
                for name, circuit in test_set:
                    src_gates, src_depth = target.metrics(circuit)
                    cands = reconstruct(circuit, model, cfg.n_enc, cfg.n_dec, rng, target)
                    for idx, c in enumerate(cands):
                        rows.append(ResultRow(
                            variant, n, g, run, name, idx,
                            safe_reduction(src_gates, c.transpiled_gates),
                            safe_reduction(src_depth, c.transpiled_depth),
                            c.density_mse,
                        ))
                    _dump_json(
                        reports / variant / size_name(n, g) / f"run{run}" / f"{name}.json",
                        search_report(circuit, cands, cfg.mse_tol, target),
                    )
    return write_csv(results_dir(cfg) / "results.csv", rows)


# baseline ---------------------------------------------------------------

def baseline_row(circuit: QuantumCircuit, coupling_map, name: str = "circuit", run: int = 0) -> ResultRow:
    """Rule-based path only: opt-1 transpile measured against opt 0."""
    t0 = transpile(circuit, coupling_map, 0)
    t1 = transpile(circuit, coupling_map, 1)
    mse = density_mse(density_matrix(logical_state(t0)), density_matrix(logical_state(t1)))
    return ResultRow(
        BASELINE_VARIANT, circuit.num_qubits, len(circuit.gates), run, name, 0,
        safe_reduction(t0.transpiled_gate_count, t1.transpiled_gate_count),
        safe_reduction(t0.depth, t1.depth),
        mse,
    )


def cmd_baseline(cfg: ExperimentConfig) -> Path:
    rows = []
    for n, g in cfg.sizes:
        _, test_set = load_split(cfg, n, g)
        rows.extend(baseline_row(c, cfg.coupling_map, name) for name, c in test_set)
    return write_csv(results_dir(cfg) / "baseline.csv", rows)


def find_checkpoint(cfg: ExperimentConfig, variant: str, n: int, g: int | None = None) -> Path:
    """Run-0 checkpoint for ``n`` qubits, preferring the closest gate count."""
    root = Path(cfg.workdir) / "checkpoints" / variant
    options = []
    for d in sorted(root.glob(f"q{n}_g*")):
        try:
            gates = int(d.name.split("_g", 1)[1])
        except ValueError:
            continue
        if (d / "run0" / "manifest.json").exists():
            options.append((abs(gates - g) if g is not None else 0, gates, d / "run0"))
    if not options:
        raise MissingCheckpoint(f"no {variant} checkpoint for {n} qubits under {root}")
    return min(options)[2]


def verify_row(row: ResultRow, source: QuantumCircuit, candidate: QuantumCircuit) -> bool:
    return abs(circuit_mse(source, candidate) - row.density_mse) <= 1e-12


__all__ = [
    "BASELINE_VARIANT",
    "CSV_HEADER",
    "ResultRow",
    "baseline_row",
    "cmd_baseline",
    "cmd_eval",
    "cmd_generate",
    "cmd_train",
    "derive_seed",
    "find_checkpoint",
    "load_split",
    "read_csv",
    "safe_reduction",
    "write_csv",
]

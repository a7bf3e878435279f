"""Input checks shared by the estimator API and the CLI."""
from __future__ import annotations

from pathlib import Path
from typing import Iterable

import numpy as np

from .circuit import QuantumCircuit, load_circuit
from .dag import CircuitDag, dag_to_circuit
from .exceptions import MixedQubitCounts


def check_circuit(x) -> QuantumCircuit:
    """Coerce a circuit, DAG, path or text to a QuantumCircuit."""
    if isinstance(x, QuantumCircuit):
        return x
    if isinstance(x, CircuitDag):
        return dag_to_circuit(x)
    if isinstance(x, Path):
        return load_circuit(x)
    if isinstance(x, str):
        if "\n" in x or x.lstrip().startswith("qubits"):
            return QuantumCircuit.from_text(x)
        return load_circuit(x)
    if isinstance(x, dict):
        return QuantumCircuit.from_json(x)
    raise TypeError(f"cannot interpret {type(x).__name__} as a circuit")


def check_circuits(xs: Iterable, same_qubits: bool = False, allow_empty: bool = False) -> list[QuantumCircuit]:
    if isinstance(xs, (QuantumCircuit, CircuitDag, str, Path, dict)):
        raise TypeError("expected a sequence of circuits, got a single circuit")
    out = [check_circuit(x) for x in xs]
    if not out and not allow_empty:
        raise ValueError("no circuits given")
    if same_qubits and len({c.num_qubits for c in out}) > 1:
        raise MixedQubitCounts(f"circuits mix qubit counts {sorted({c.num_qubits for c in out})}")
    return out


def check_latent(z, latent_dim: int) -> np.ndarray:
    z = np.asarray(z, dtype=np.float64)
    if z.ndim == 1:
        z = z[None, :]
    if z.ndim != 2 or z.shape[1] != latent_dim:
        raise ValueError(f"latent array must have shape (n, {latent_dim}), got {z.shape}")
    if not np.all(np.isfinite(z)):
        raise ValueError("latent array contains non-finite values")
    return z


def check_positive(name: str, value, integer: bool = False):
    if integer and (isinstance(value, bool) or int(value) != value):
        raise ValueError(f"{name} must be an integer, got {value!r}")
    if not value > 0:
        raise ValueError(f"{name} must be positive, got {value!r}")
    return int(value) if integer else float(value)


def check_fraction(name: str, value) -> float:
    value = float(value)
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"{name} must be in [0, 1], got {value}")
    return value

"""Circuit intermediate representation, random generation and file formats."""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .exceptions import CircuitError
from .gates import ALL_KINDS, ONE_QUBIT_KINDS, GateKind, gate_unitary, kind_from_name


@dataclass(frozen=True)
class GateApplication:
    kind: GateKind
    qubits: tuple[int, ...]

    def __post_init__(self):
        kind = GateKind(self.kind)
        qubits = tuple(int(q) for q in self.qubits)
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "qubits", qubits)
        if len(qubits) != kind.arity:
            raise CircuitError(f"{kind} expects {kind.arity} operand(s), got {qubits}")
        if len(set(qubits)) != len(qubits):
            raise CircuitError(f"repeated operand in {kind} {qubits}")
        if any(q < 0 for q in qubits):
            raise CircuitError(f"negative operand in {kind} {qubits}")

    # shared with transpiler instructions so passes and the simulator can
    # treat both uniformly
    @property
    def name(self) -> str:
        return self.kind.value

    @property
    def angle(self) -> None:
        return None

    @property
    def matrix(self) -> np.ndarray:
        return gate_unitary(self.kind)

    def __str__(self) -> str:
        return f"{self.kind.value} " + " ".join(map(str, self.qubits))


@dataclass(frozen=True)
class QuantumCircuit:
    """An ``num_qubits``-wide ordered list of gate applications."""

    num_qubits: int
    gates: tuple[GateApplication, ...] = ()

    def __post_init__(self):
        if int(self.num_qubits) < 1:
            raise CircuitError("a circuit needs at least one qubit")
        object.__setattr__(self, "num_qubits", int(self.num_qubits))
        gates = tuple(
            g if isinstance(g, GateApplication) else GateApplication(*g) for g in self.gates
        )
        for g in gates:
            if max(g.qubits) >= self.num_qubits:
                raise CircuitError(f"operand of '{g}' outside {self.num_qubits} qubits")
        object.__setattr__(self, "gates", gates)

    def __len__(self) -> int:
        return len(self.gates)

    def __iter__(self):
        return iter(self.gates)

    def append(self, kind: GateKind | str, *qubits: int) -> "QuantumCircuit":
        """Return a new circuit with one more gate."""
        return QuantumCircuit(self.num_qubits, self.gates + (GateApplication(kind, qubits),))

    @classmethod
    def from_list(cls, num_qubits: int, ops: Iterable[Sequence]) -> "QuantumCircuit":
        """Build from ``[("cx", 0, 1), ("h", 0), ...]``."""
        return cls(num_qubits, tuple(GateApplication(op[0], tuple(op[1:])) for op in ops))

    def to_text(self) -> str:
        lines = [f"qubits {self.num_qubits}"]
        lines += [f"gate {g}" for g in self.gates]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "QuantumCircuit":
        num_qubits = None
        gates = []
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            try:
                if num_qubits is None:
                    if parts[0] != "qubits" or len(parts) != 2:
                        raise CircuitError("first statement must be 'qubits N'")
                    num_qubits = int(parts[1])
                    continue
                if parts[0] != "gate" or len(parts) < 3:
                    raise CircuitError(f"expected 'gate <kind> <q0> [<q1>]', got {line!r}")
                gates.append(GateApplication(kind_from_name(parts[1]), tuple(int(p) for p in parts[2:])))
            except (CircuitError, ValueError) as exc:
                raise CircuitError(f"line {lineno}: {exc}") from None
        if num_qubits is None:
            raise CircuitError("missing 'qubits N' header")
        return cls(num_qubits, tuple(gates))

    def to_json(self) -> dict:
        return {
            "num_qubits": self.num_qubits,
            "gates": [{"kind": g.kind.value, "qubits": list(g.qubits)} for g in self.gates],
        }

    @classmethod
    def from_json(cls, data: dict) -> "QuantumCircuit":
        try:
            return cls(
                data["num_qubits"],
                tuple(GateApplication(kind_from_name(g["kind"]), tuple(g["qubits"])) for g in data["gates"]),
            )
        except (KeyError, TypeError) as exc:
            raise CircuitError(f"malformed circuit JSON: {exc}") from None


def load_circuit(path: str | Path) -> QuantumCircuit:
    """Read a circuit from a text file, or JSON when the suffix is ``.json``."""
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    if path.suffix == ".json":
        try:
            return QuantumCircuit.from_json(json.loads(text))
        except json.JSONDecodeError as exc:
            raise CircuitError(f"{path}: {exc}") from None
    return QuantumCircuit.from_text(text)


def save_circuit(circuit: QuantumCircuit, path: str | Path) -> None:
    path = Path(path)
    if path.suffix == ".json":
        path.write_text(json.dumps(circuit.to_json()) + "\n", encoding="utf-8")
    else:
        path.write_text(circuit.to_text(), encoding="utf-8")


def random_circuit(n_qubits: int, n_gates: int, seed=None) -> QuantumCircuit:
    """Uniformly random circuit over the vocabulary.

    Single-qubit circuits draw only from the one-qubit kinds. ``seed`` is
    anything accepted by :func:`numpy.random.default_rng`.
    """
    if n_qubits < 1:
        raise CircuitError("n_qubits must be >= 1")
    rng = np.random.default_rng(seed)
    kinds = ALL_KINDS if n_qubits >= 2 else ONE_QUBIT_KINDS
    gates = []
    for _ in range(n_gates):
        kind = kinds[rng.integers(len(kinds))]
        qubits = rng.choice(n_qubits, size=kind.arity, replace=False)
        gates.append(GateApplication(kind, tuple(int(q) for q in qubits)))
    return QuantumCircuit(n_qubits, tuple(gates))

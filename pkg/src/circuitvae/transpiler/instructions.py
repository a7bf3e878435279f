"""Instruction type for lowered (possibly parametric) circuits."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..gates import GateKind, gate_unitary

TWO_PI = 2 * math.pi
_QUARTER = math.pi / 4


def rz_matrix(theta: float) -> np.ndarray:
    return np.array([[np.exp(-0.5j * theta), 0], [0, np.exp(0.5j * theta)]], dtype=complex)


def normalize_angle(theta: float, tol: float = 1e-9) -> float:
    """Wrap into (-pi, pi]; snap to an exact multiple of pi/4 when within ``tol``."""
    theta = math.remainder(theta, TWO_PI)
    if theta <= -math.pi + tol:
        theta += TWO_PI
    k = round(theta / _QUARTER)
    if abs(theta - k * _QUARTER) <= tol:
        theta = k * _QUARTER
        if k == -4:
            theta = math.pi
    return theta


@dataclass(frozen=True)
class Instruction:
    """A gate in a lowered circuit: a vocabulary name or ``rz`` with an angle."""

    name: str
    qubits: tuple[int, ...]
    angle: float | None = None

    @property
    def matrix(self) -> np.ndarray:
        if self.name == "rz":
            return rz_matrix(self.angle)
        return gate_unitary(GateKind(self.name))

    def remap(self, mapping) -> "Instruction":
        return Instruction(self.name, tuple(mapping[q] for q in self.qubits), self.angle)

    def __str__(self) -> str:
        head = self.name if self.angle is None else f"{self.name}({self.angle:.6g})"
        return f"{head} " + " ".join(map(str, self.qubits))


@dataclass(frozen=True)
class LoweredCircuit:
    """Circuit over instructions; shares ``num_qubits``/``gates`` with QuantumCircuit."""

    num_qubits: int
    gates: tuple[Instruction, ...] = ()

    def __len__(self) -> int:
        return len(self.gates)

    def to_json(self) -> dict:
        return {
            "num_qubits": self.num_qubits,
            "gates": [
                {"kind": g.name, "qubits": list(g.qubits), **({"angle": g.angle} if g.angle is not None else {})}
                for g in self.gates
            ],
        }


def as_instructions(circuit) -> list[Instruction]:
    return [
        g if isinstance(g, Instruction) else Instruction(g.name, tuple(g.qubits), g.angle)
        for g in circuit.gates
    ]

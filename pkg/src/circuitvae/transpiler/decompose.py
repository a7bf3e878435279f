"""Gate decomposition: two-qubit kinds into cx + single-qubit gates, and
single-qubit unitaries into the rz/sx basis."""
from __future__ import annotations

import math

import numpy as np

from ..exceptions import NotUnitary
from ..gates import GateKind, gate_unitary
from ..simulator import phase_equivalent
from .instructions import Instruction, normalize_angle, rz_matrix

# operands are local: 0 = first operand (control), 1 = second
_TABLE_2Q: dict[GateKind, tuple[tuple, ...]] = {
    GateKind.CX: (("cx", 0, 1),),
    GateKind.CY: (("sdg", 1), ("cx", 0, 1), ("s", 1)),
    GateKind.CZ: (("h", 1), ("cx", 0, 1), ("h", 1)),
    GateKind.CH: (("s", 1), ("h", 1), ("t", 1), ("cx", 0, 1), ("tdg", 1), ("h", 1), ("sdg", 1)),
    GateKind.SWAP: (("cx", 0, 1), ("cx", 1, 0), ("cx", 0, 1)),
    GateKind.DCX: (("cx", 0, 1), ("cx", 1, 0)),
    GateKind.ISWAP: (("s", 0), ("s", 1), ("h", 0), ("cx", 0, 1), ("cx", 1, 0), ("h", 1)),
    GateKind.CS: (("t", 0), ("cx", 0, 1), ("tdg", 1), ("cx", 0, 1), ("t", 1)),
    GateKind.CSDG: (("tdg", 0), ("cx", 0, 1), ("t", 1), ("cx", 0, 1), ("tdg", 1)),
    GateKind.CSX: (("h", 1), ("t", 0), ("cx", 0, 1), ("tdg", 1), ("cx", 0, 1), ("t", 1), ("h", 1)),
    GateKind.ECR: (("s", 0), ("sx", 1), ("cx", 0, 1), ("x", 0)),
}


def decompose_2q(kind: GateKind | str) -> list[Instruction]:
    """Equivalent (up to global phase) sequence on local operands 0 and 1."""
    kind = GateKind(kind)
    if kind.arity != 2:
        raise ValueError(f"{kind} is not a two-qubit gate")
    return [Instruction(name, tuple(qubits)) for name, *qubits in _TABLE_2Q[kind]]


_FIXED = {"sx": gate_unitary(GateKind.SX), "x": gate_unitary(GateKind.X)}


def _zyz(u: np.ndarray) -> tuple[float, float, float]:
    v = u / np.sqrt(np.linalg.det(u))
    theta = 2 * math.atan2(abs(v[1, 0]), abs(v[0, 0]))
    a11 = float(np.angle(v[1, 1]))
    a10 = float(np.angle(v[1, 0]))
    return theta, a11 + a10, a11 - a10


def _product(seq: list[tuple[str, float | None]]) -> np.ndarray:
    m = np.eye(2, dtype=complex)
    for name, angle in seq:
        m = (rz_matrix(angle) if name == "rz" else _FIXED[name]) @ m
    return m


def _clean(seq) -> list[tuple[str, float | None]]:
    out = []
    for name, angle in seq:
        if name == "rz":
            angle = normalize_angle(angle)
            if angle == 0.0:
                continue
        out.append((name, angle))
    return out


def euler_1q(u: np.ndarray, tol: float = 1e-8) -> list[tuple[str, float | None]]:
    """Shortest ``rz / sx`` sequence (time order) equal to ``u`` up to phase.

    Returns ``(name, angle)`` pairs; ``angle`` is ``None`` for ``sx`` and ``x``.
    Anti-diagonal unitaries use the native ``x`` instead of two ``sx``.
    """
    u = np.asarray(u, dtype=complex)
    if u.shape != (2, 2) or np.max(np.abs(u @ u.conj().T - np.eye(2))) > 1e-10:
        raise NotUnitary("euler_1q needs a 2x2 unitary")
    theta, phi, lam = _zyz(u)
    templates = [
        [("rz", phi + lam)],
        [("rz", lam - math.pi / 2), ("sx", None), ("rz", phi + math.pi / 2)],
        [("rz", lam + math.pi / 2), ("sx", None), ("rz", phi - math.pi / 2)],
        [("rz", lam - phi + math.pi), ("x", None)],
        [("rz", lam), ("sx", None), ("rz", theta + math.pi), ("sx", None), ("rz", phi + math.pi)],
    ]
    for seq in templates:
        seq = _clean(seq)
        if phase_equivalent(_product(seq), u, tol):
            return seq
    raise NotUnitary("no template reproduced the unitary")  # pragma: no cover


def lower_1q(u: np.ndarray, qubit: int) -> list[Instruction]:
    return [Instruction(name, (qubit,), angle) for name, angle in euler_1q(u)]

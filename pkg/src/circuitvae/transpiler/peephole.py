"""Rule-based cancellation of adjacent inverse gate pairs."""
from __future__ import annotations

import math

from ..circuit import QuantumCircuit
from .instructions import TWO_PI, LoweredCircuit

SELF_INVERSE = frozenset({"x", "y", "z", "h", "cx", "cy", "cz", "ch", "swap"})
INVERSE_OF = {
    "s": "sdg", "sdg": "s",
    "t": "tdg", "tdg": "t",
    "sx": "sxdg", "sxdg": "sx",
    "cs": "csdg", "csdg": "cs",
}
# operand order is irrelevant for these
SYMMETRIC = frozenset({"cz", "swap", "cs", "csdg"})
ANGLE_TOL = 1e-9


def _is_noop(op) -> bool:
    if op.name == "id":
        return True
    return op.name == "rz" and _zero_angle(op.angle)


def _zero_angle(theta: float) -> bool:
    return abs(math.remainder(theta, TWO_PI)) <= ANGLE_TOL


def cancels(a, b) -> bool:
    """True when ``b`` directly after ``a`` composes to the identity."""
    if a.name in SYMMETRIC or b.name in SYMMETRIC:
        same = sorted(a.qubits) == sorted(b.qubits)
    else:
        same = a.qubits == b.qubits
    if a.name == "dcx" and b.name == "dcx":
        return a.qubits == b.qubits[::-1]
    if not same:
        return False
    if a.name == b.name and a.name in SELF_INVERSE:
        return True
    if INVERSE_OF.get(a.name) == b.name:
        return True
    if a.name == "rz" and b.name == "rz":
        return _zero_angle(a.angle + b.angle)
    return False


def _cancel(ops: list) -> list:
    out: list = []
    alive: list[bool] = []
    stacks: dict[int, list[int]] = {}
    for op in ops:
        if _is_noop(op):
            continue
        tops = [stacks[q][-1] if stacks.get(q) else None for q in op.qubits]
        j = tops[0]
        if j is not None and all(t == j for t in tops) and set(out[j].qubits) == set(op.qubits) \
                and cancels(out[j], op):
            alive[j] = False
            for q in op.qubits:
                stacks[q].pop()
            continue
        out.append(op)
        alive.append(True)
        for q in op.qubits:
            stacks.setdefault(q, []).append(len(out) - 1)
    return [op for op, keep in zip(out, alive) if keep]


def peephole_ops(ops: list) -> list:
    """Cancel pairs until a fixpoint is reached."""
    while True:
        new = _cancel(ops)
        if len(new) == len(ops):
            return new
        ops = new


def peephole(circuit):
    """Return a circuit of the same type with inverse pairs removed."""
    ops = peephole_ops(list(circuit.gates))
    if isinstance(circuit, QuantumCircuit):
        return QuantumCircuit(circuit.num_qubits, tuple(ops))
    return LoweredCircuit(circuit.num_qubits, tuple(ops))

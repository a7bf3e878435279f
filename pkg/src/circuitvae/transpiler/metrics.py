"""Gate-count, depth and reduction metrics."""
from __future__ import annotations

from ..exceptions import ZeroOriginal


def gate_count(circuit) -> int:
    return len(circuit.gates)


def depth(circuit) -> int:
    """Longest chain of gates; gates on disjoint qubits share a layer."""
    level = [0] * circuit.num_qubits
    for g in circuit.gates:
        d = max(level[q] for q in g.qubits) + 1
        for q in g.qubits:
            level[q] = d
    return max(level, default=0)


def reduction_pct(original: int, new: int) -> float:
    """Percentage reduction from ``original`` to ``new`` (negative on growth)."""
    if original == 0:
        raise ZeroOriginal("reduction of a zero-size original is undefined")
    return 100.0 * (original - new) / original

"""Lowering pipeline: decompose, route, fuse single-qubit runs, cancel."""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from ..simulator import simulate
from .coupling import CouplingMap, get_coupling_map
from .decompose import decompose_2q, lower_1q
from .instructions import Instruction, LoweredCircuit
from .metrics import depth, gate_count
from .peephole import peephole_ops
from .routing import route

BASIS_1Q = frozenset({"rz", "sx", "x"})


@dataclass(frozen=True)
class TranspiledCircuit:
    circuit: LoweredCircuit
    final_layout: tuple[int, ...]
    source_gate_count: int
    transpiled_gate_count: int
    depth: int
    num_logical: int
    swaps: int = 0

    def report(self) -> dict:
        return {
            "source_gate_count": self.source_gate_count,
            "transpiled_gate_count": self.transpiled_gate_count,
            "depth": self.depth,
            "swaps": self.swaps,
            "final_layout": list(self.final_layout),
        }

    def to_json(self) -> str:
        return json.dumps(self.report())


def _expand_2q(circuit) -> list[Instruction]:
    ops = []
    for g in circuit.gates:
        if len(g.qubits) == 2 and g.name != "cx":
            ops.extend(ins.remap(g.qubits) for ins in decompose_2q(g.name))
        else:
            ops.append(Instruction(g.name, tuple(g.qubits), g.angle))
    return ops


def _lower_single(op: Instruction) -> list[Instruction]:
    if op.name in BASIS_1Q:
        return [op]
    return lower_1q(op.matrix, op.qubits[0])


def _lower_each(ops: list[Instruction]) -> list[Instruction]:
    out = []
    for op in ops:
        out.extend(_lower_single(op) if len(op.qubits) == 1 else [op])
    return out


def _fuse_runs(ops: list[Instruction]) -> list[Instruction]:
    """Merge maximal single-qubit runs, keeping whichever lowering is shorter."""
    out: list[Instruction] = []
    pending: dict[int, list[Instruction]] = {}

    def flush(q: int):
        run = pending.pop(q, [])
        if not run:
            return
        m = np.eye(2, dtype=complex)
        for op in run:
            m = op.matrix @ m
        fused = lower_1q(m, q)
        separate = [x for op in run for x in _lower_single(op)]
        out.extend(fused if len(fused) <= len(separate) else separate)

    for op in ops:
        if len(op.qubits) == 1:
            pending.setdefault(op.qubits[0], []).append(op)
            continue
        for q in op.qubits:
            flush(q)
        out.append(op)
    for q in sorted(pending):
        flush(q)
    return out


def transpile(circuit, coupling_map=None, opt: int = 1, initial_layout=None) -> TranspiledCircuit:
    """Lower ``circuit`` to {rz, sx, x, cx} on ``coupling_map``.

    ``opt=0`` lowers gate by gate; ``opt=1`` also fuses single-qubit runs and
    cancels inverse pairs until nothing changes.
    """
    if opt not in (0, 1):
        raise ValueError("opt must be 0 or 1")
    cmap: CouplingMap = get_coupling_map(coupling_map, circuit.num_qubits)
    ops, layout, swaps = route(_expand_2q(circuit), circuit.num_qubits, cmap, initial_layout)
    if opt == 0:
        ops = _lower_each(ops)
    else:
        while True:
            before = len(ops)
            ops = peephole_ops(_fuse_runs(ops))
            if len(ops) >= before:
                break
    lowered = LoweredCircuit(cmap.num_physical, tuple(ops))
    return TranspiledCircuit(
        circuit=lowered,
        final_layout=layout,
        source_gate_count=gate_count(circuit),
        transpiled_gate_count=gate_count(lowered),
        depth=depth(lowered),
        num_logical=circuit.num_qubits,
        swaps=swaps,
    )


def logical_state(result: TranspiledCircuit) -> np.ndarray:
    """Statevector of the logical qubits after undoing the final layout.

    Idle physical qubits must end in |0>; their amplitude is dropped.
    """
    psi = simulate(result.circuit).reshape((2,) * result.circuit.num_qubits)
    used = list(result.final_layout)
    idle = [p for p in range(result.circuit.num_qubits) if p not in used]
    psi = np.transpose(psi, used + idle)
    return psi.reshape(2**result.num_logical, -1)[:, 0].copy()

"""Greedy swap insertion on a coupling map."""
from __future__ import annotations

from ..exceptions import DisconnectedMap
from .coupling import CouplingMap
from .instructions import Instruction


def route(ops: list[Instruction], num_logical: int, cmap: CouplingMap, initial_layout=None):
    """Map logical instructions onto physical qubits.

    Gates are processed in order. For a two-qubit gate on non-adjacent
    physical qubits, the first operand is swapped along a BFS shortest path
    until it neighbours the second. Each swap is emitted as three cx.

    Returns ``(physical_ops, final_layout, n_swaps)`` where ``final_layout[i]``
    is the physical qubit holding logical qubit ``i`` at the end.
    """
    if num_logical > cmap.num_physical:
        raise ValueError(f"{num_logical} logical qubits do not fit on {cmap.num_physical} physical")
    if not cmap.is_connected():
        raise DisconnectedMap(f"coupling map {cmap.name} is not connected")
    layout = list(range(num_logical)) if initial_layout is None else list(initial_layout)
    if len(set(layout)) != num_logical:
        raise ValueError("initial layout must be injective")
    # occupant[p] = logical index, or None for an idle physical qubit
    occupant: list[int | None] = [None] * cmap.num_physical
    for lq, p in enumerate(layout):
        occupant[p] = lq

    out: list[Instruction] = []
    n_swaps = 0

    def swap(p: int, q: int):
        nonlocal n_swaps
        out.extend([Instruction("cx", (p, q)), Instruction("cx", (q, p)), Instruction("cx", (p, q))])
        a, b = occupant[p], occupant[q]
        occupant[p], occupant[q] = b, a
        if a is not None:
            layout[a] = q
        if b is not None:
            layout[b] = p
        n_swaps += 1

    for op in ops:
        if len(op.qubits) == 2:
            pa, pb = layout[op.qubits[0]], layout[op.qubits[1]]
            if not cmap.adjacent(pa, pb):
                path = cmap.shortest_path(pa, pb)
                for nxt in path[1:-1]:
                    swap(layout[op.qubits[0]], nxt)
        out.append(op.remap(layout))
    return out, tuple(layout), n_swaps

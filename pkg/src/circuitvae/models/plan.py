"""Per-DAG index structures consumed by the encoders and teacher forcing."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from ..dag import END, START, CircuitDag, topological_order, validate_dag, wire_labels
from .config import END_TYPE, START_TYPE


def node_type_index(node) -> int:
    if node == START:
        return START_TYPE
    if node == END:
        return END_TYPE
    return node.index


@dataclass(frozen=True)
class DagPlan:
    num_qubits: int
    order: tuple[int, ...]
    types: tuple[int, ...]
    # per node: (source node, wire label, src_port, dst_port), sorted by dst_port
    preds: tuple[tuple[tuple[int, int, int, int], ...], ...]
    # per node: (dest node, wire label, src_port, dst_port), sorted by src_port
    succs: tuple[tuple[tuple[int, int, int, int], ...], ...]
    # gate nodes in order as (type index, operand qubits)
    sequence: tuple[tuple[int, tuple[int, ...]], ...]
    # position-indexed views: (type, ((neighbour position, wire label, edge category), ...))
    forward_steps: tuple = ()
    reverse_steps: tuple = ()

    @property
    def end(self) -> int:
        return len(self.types) - 1


@lru_cache(maxsize=4096)
def plan_dag(dag: CircuitDag) -> DagPlan:
    validate_dag(dag)
    order = topological_order(dag)
    labels = wire_labels(dag, order)
    preds = [[] for _ in dag.nodes]
    succs = [[] for _ in dag.nodes]
    for src, sp, dst, dp in dag.edges:
        q = labels[(src, sp)]
        preds[dst].append((src, q, sp, dp))
        succs[src].append((dst, q, sp, dp))
    for lst in preds:
        lst.sort(key=lambda e: e[3])
    for lst in succs:
        lst.sort(key=lambda e: e[2])
    types = tuple(node_type_index(n) for n in dag.nodes)
    sequence = tuple(
        (types[v], tuple(e[1] for e in preds[v])) for v in order if v not in (0, dag.end)
    )
    end = len(dag.nodes) - 1
    pos = {v: i for i, v in enumerate(order)}
    rpos = {v: len(order) - 1 - i for i, v in enumerate(order)}
    forward_steps = tuple(
        (types[v], tuple((pos[e[0]], e[1], edge_category(e[0], e[2], v, e[3], end)) for e in preds[v]))
        for v in order
    )
    reverse_steps = tuple(
        (types[v], tuple((rpos[e[0]], e[1], edge_category(v, e[2], e[0], e[3], end)) for e in succs[v]))
        for v in reversed(order)
    )
    return DagPlan(
        num_qubits=dag.num_qubits,
        order=tuple(order),
        types=types,
        preds=tuple(tuple(p) for p in preds),
        succs=tuple(tuple(s) for s in succs),
        sequence=sequence,
        forward_steps=forward_steps,
        reverse_steps=reverse_steps,
    )


def edge_category(src: int, src_port: int, dst: int, dst_port: int, end: int) -> int:
    """Index into a 3 x 3 grid of (source port, destination port); a start
    or end terminal counts as port 2."""
    s = src_port if 0 < src < end else 2
    d = dst_port if 0 < dst < end else 2
    return 3 * s + d

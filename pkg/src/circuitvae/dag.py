"""Port-labelled DAG rendering of circuits and the conversions both ways.

A DAG has node 0 = start, last node = end, and gate nodes in between. An
edge ``(src, src_port, dst, dst_port)`` carries one qubit wire. The start
node's output port ``i`` carries qubit ``i``; a gate's output port ``i``
carries whatever qubit entered its input port ``i``.
"""
from __future__ import annotations

import heapq
import json
from dataclasses import dataclass
from typing import Union

from .circuit import GateApplication, QuantumCircuit
from .exceptions import CycleDetected, InvalidDag
from .gates import GateKind

START = "start"
END = "end"

NodeType = Union[str, GateKind]
Edge = tuple[int, int, int, int]


def node_arity(node: NodeType, num_qubits: int) -> tuple[int, int]:
    """(input ports, output ports) of a node."""
    if node == START:
        return 0, num_qubits
    if node == END:
        return num_qubits, 0
    k = GateKind(node).arity
    return k, k


@dataclass(frozen=True)
class CircuitDag:
    nodes: tuple[NodeType, ...]
    edges: tuple[Edge, ...]

    def __post_init__(self):
        nodes = tuple(n if n in (START, END) else GateKind(n) for n in self.nodes)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "edges", tuple(tuple(int(v) for v in e) for e in self.edges))

    @property
    def num_qubits(self) -> int:
        return sum(1 for e in self.edges if e[0] == 0)

    @property
    def end(self) -> int:
        return len(self.nodes) - 1

    @property
    def num_gates(self) -> int:
        return len(self.nodes) - 2

    def in_edges(self) -> list[list[Edge]]:
        """Per node, incoming edges sorted by destination port."""
        out = [[] for _ in self.nodes]
        for e in self.edges:
            out[e[2]].append(e)
        for lst in out:
            lst.sort(key=lambda e: e[3])
        return out

    def out_edges(self) -> list[list[Edge]]:
        """Per node, outgoing edges sorted by source port."""
        out = [[] for _ in self.nodes]
        for e in self.edges:
            out[e[0]].append(e)
        for lst in out:
            lst.sort(key=lambda e: e[1])
        return out

    def to_json(self) -> dict:
        return {
            "nodes": [{"type": n if isinstance(n, str) and n in (START, END) else n.value} for n in self.nodes],
            "edges": [list(e) for e in self.edges],
        }

    @classmethod
    def from_json(cls, data: dict) -> "CircuitDag":
        try:
            nodes = tuple(n["type"] if n["type"] in (START, END) else GateKind(n["type"]) for n in data["nodes"])
            return cls(nodes, tuple(tuple(e) for e in data["edges"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidDag(f"malformed DAG JSON: {exc}") from None

    def dumps(self) -> str:
        return json.dumps(self.to_json())


def circuit_to_dag(circuit: QuantumCircuit) -> CircuitDag:
    n = circuit.num_qubits
    nodes: list[NodeType] = [START]
    edges: list[Edge] = []
    dangling = [(0, q) for q in range(n)]  # qubit -> (node, out port)
    for g in circuit.gates:
        v = len(nodes)
        nodes.append(g.kind)
        for port, q in enumerate(g.qubits):
            src, src_port = dangling[q]
            edges.append((src, src_port, v, port))
            dangling[q] = (v, port)
    end = len(nodes)
    nodes.append(END)
    for q, (src, src_port) in enumerate(dangling):
        edges.append((src, src_port, end, q))
    return CircuitDag(tuple(nodes), tuple(edges))


def validate_dag(dag: CircuitDag) -> None:
    """Raise :class:`InvalidDag` unless every structural invariant holds."""
    nodes = dag.nodes
    if len(nodes) < 2 or nodes[0] != START or nodes[-1] != END:
        raise InvalidDag("node 0 must be start and the last node end")
    if sum(1 for x in nodes if x == START) != 1 or sum(1 for x in nodes if x == END) != 1:
        raise InvalidDag("exactly one start and one end node required")
    n = dag.num_qubits
    if n < 1:
        raise InvalidDag("start node has no outputs")
    used_in, used_out = set(), set()
    for src, sp, dst, dp in dag.edges:
        if not (0 <= src < len(nodes) and 0 <= dst < len(nodes)):
            raise InvalidDag(f"edge endpoint out of range: {(src, sp, dst, dp)}")
        n_out = node_arity(nodes[src], n)[1]
        n_in = node_arity(nodes[dst], n)[0]
        if not 0 <= sp < n_out:
            raise InvalidDag(f"node {src} has no output port {sp}")
        if not 0 <= dp < n_in:
            raise InvalidDag(f"node {dst} has no input port {dp}")
        if (src, sp) in used_out:
            raise InvalidDag(f"output port {sp} of node {src} used twice")
        if (dst, dp) in used_in:
            raise InvalidDag(f"input port {dp} of node {dst} used twice")
        used_out.add((src, sp))
        used_in.add((dst, dp))
    for v, node in enumerate(nodes):
        n_in, n_out = node_arity(node, n)
        for p in range(n_in):
            if (v, p) not in used_in:
                raise InvalidDag(f"input port {p} of node {v} is dangling")
        for p in range(n_out):
            if (v, p) not in used_out:
                raise InvalidDag(f"output port {p} of node {v} is dangling")
    topological_order(dag)


def topological_order(dag: CircuitDag) -> list[int]:
    """Kahn's algorithm; ties broken by ascending node id."""
    indeg = [0] * len(dag.nodes)
    succ = [[] for _ in dag.nodes]
    for src, _, dst, _ in dag.edges:
        indeg[dst] += 1
        succ[src].append(dst)
    heap = [v for v, d in enumerate(indeg) if d == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        v = heapq.heappop(heap)
        order.append(v)
        for w in succ[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                heapq.heappush(heap, w)
    if len(order) != len(dag.nodes):
        raise CycleDetected("DAG contains a cycle")
    return order


def wire_labels(dag: CircuitDag, order: list[int] | None = None) -> dict[tuple[int, int], int]:
    """Qubit carried by every output port ``(node, port)``."""
    if order is None:
        order = topological_order(dag)
    ins = dag.in_edges()
    labels: dict[tuple[int, int], int] = {(0, q): q for q in range(dag.num_qubits)}
    for v in order:
        if v == 0 or v == dag.end:
            continue
        for src, sp, _, dp in ins[v]:
            labels[(v, dp)] = labels[(src, sp)]
    return labels


def dag_to_circuit(dag: CircuitDag) -> QuantumCircuit:
    validate_dag(dag)
    order = topological_order(dag)
    labels = wire_labels(dag, order)
    ins = dag.in_edges()
    gates = []
    for v in order:
        if v == 0 or v == dag.end:
            continue
        qubits = tuple(labels[(src, sp)] for src, sp, _, _ in ins[v])
        if len(set(qubits)) != len(qubits):
            raise InvalidDag(f"node {v} receives qubit {qubits[0]} twice")
        gates.append(GateApplication(dag.nodes[v], qubits))
    end_labels = sorted(labels[(src, sp)] for src, sp, _, _ in ins[dag.end])
    if end_labels != list(range(dag.num_qubits)):
        raise InvalidDag("end node does not receive every qubit exactly once")
    return QuantumCircuit(dag.num_qubits, tuple(gates))

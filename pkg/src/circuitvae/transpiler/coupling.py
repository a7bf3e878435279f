"""Coupling maps: physical qubit connectivity graphs."""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

from ..exceptions import DisconnectedMap


@dataclass(frozen=True)
class CouplingMap:
    num_physical: int
    edges: frozenset[frozenset[int]]
    name: str = "custom"

    def __post_init__(self):
        edges = frozenset(frozenset(int(x) for x in e) for e in self.edges)
        for e in edges:
            if len(e) != 2:
                raise ValueError(f"self-loop or malformed edge {sorted(e)}")
            if max(e) >= self.num_physical or min(e) < 0:
                raise ValueError(f"edge {sorted(e)} outside {self.num_physical} qubits")
        object.__setattr__(self, "edges", edges)

    @classmethod
    def from_pairs(cls, n: int, pairs, name: str = "custom") -> "CouplingMap":
        return cls(n, frozenset(frozenset(p) for p in pairs), name)

    @cached_property
    def neighbors(self) -> tuple[tuple[int, ...], ...]:
        adj = [set() for _ in range(self.num_physical)]
        for a, b in (tuple(e) for e in self.edges):
            adj[a].add(b)
            adj[b].add(a)
        return tuple(tuple(sorted(s)) for s in adj)

    def adjacent(self, a: int, b: int) -> bool:
        return frozenset((a, b)) in self.edges

    def is_connected(self) -> bool:
        if self.num_physical == 1:
            return True
        seen = {0}
        todo = [0]
        while todo:
            for w in self.neighbors[todo.pop()]:
                if w not in seen:
                    seen.add(w)
                    todo.append(w)
        return len(seen) == self.num_physical

    def shortest_path(self, src: int, dst: int) -> list[int]:
        """BFS path; neighbours explored in ascending order."""
        parent = {src: None}
        queue = deque([src])
        while queue:
            v = queue.popleft()
            if v == dst:
                break
            for w in self.neighbors[v]:
                if w not in parent:
                    parent[w] = v
                    queue.append(w)
        if dst not in parent:
            raise DisconnectedMap(f"no path between physical qubits {src} and {dst}")
        path = [dst]
        while path[-1] != src:
            path.append(parent[path[-1]])
        return path[::-1]

    def to_json(self) -> dict:
        return {"n": self.num_physical, "edges": sorted(sorted(e) for e in self.edges)}

    @classmethod
    def from_json(cls, data: dict, name: str = "custom") -> "CouplingMap":
        return cls.from_pairs(int(data["n"]), data["edges"], name)


def line_map(n: int) -> CouplingMap:
    return CouplingMap.from_pairs(n, [(i, i + 1) for i in range(n - 1)], f"line-{n}")


def ring_map(n: int) -> CouplingMap:
    pairs = [(i, (i + 1) % n) for i in range(n)] if n > 2 else [(i, i + 1) for i in range(n - 1)]
    return CouplingMap.from_pairs(n, pairs, f"ring-{n}")


def full_map(n: int) -> CouplingMap:
    return CouplingMap.from_pairs(n, [(i, j) for i in range(n) for j in range(i + 1, n)], f"full-{n}")


def heavy_hex_12() -> CouplingMap:
    """A 10-qubit ring with two degree-1 bridge qubits (max degree 3)."""
    pairs = [(i, (i + 1) % 10) for i in range(10)] + [(0, 10), (5, 11)]
    return CouplingMap.from_pairs(12, pairs, "heavy-hex-12")


DEFAULT_MAP = "heavy-hex-12"


def get_coupling_map(spec, num_qubits: int | None = None) -> CouplingMap:
    """Resolve a map from a name (``line-5``, ``ring``, ``heavy-hex-12`` ...),
    a JSON file path, a ``{"n", "edges"}`` dict or a CouplingMap.

    Names without a size (``line``, ``ring``, ``full``) take ``num_qubits``.
    """
    if isinstance(spec, CouplingMap):
        return spec
    if spec is None:
        spec = DEFAULT_MAP
    if isinstance(spec, dict):
        return CouplingMap.from_json(spec)
    spec = str(spec)
    if spec == "heavy-hex-12":
        return heavy_hex_12()
    family, _, size = spec.partition("-")
    builders = {"line": line_map, "ring": ring_map, "full": full_map}
    if family in builders:
        n = int(size) if size else num_qubits
        if n is None:
            raise ValueError(f"map {spec!r} needs a size")
        return builders[family](n)
    path = Path(spec)
    if path.exists():
        return CouplingMap.from_json(json.loads(path.read_text()), path.stem)
    raise ValueError(f"unknown coupling map {spec!r}")

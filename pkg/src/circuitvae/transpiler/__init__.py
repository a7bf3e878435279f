"""Deterministic lowering onto a native basis and a coupling map."""
from .core import TranspiledCircuit, logical_state, transpile
from .coupling import DEFAULT_MAP, CouplingMap, full_map, get_coupling_map, heavy_hex_12, line_map, ring_map
from .decompose import decompose_2q, euler_1q
from .instructions import Instruction, LoweredCircuit
from .metrics import depth, gate_count, reduction_pct
from .peephole import peephole
from .routing import route

__all__ = [
    "CouplingMap",
    "DEFAULT_MAP",
    "Instruction",
    "LoweredCircuit",
    "TranspiledCircuit",
    "decompose_2q",
    "depth",
    "euler_1q",
    "full_map",
    "gate_count",
    "get_coupling_map",
    "heavy_hex_12",
    "line_map",
    "logical_state",
    "peephole",
    "reduction_pct",
    "ring_map",
    "route",
    "transpile",
]

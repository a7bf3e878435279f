"""Candidate generation around a circuit's latent code, ranking and
selection, and block-wise optimisation of wide circuits."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .circuit import GateApplication, QuantumCircuit
from .dag import dag_to_circuit
from .models import GraphVAE, decode_batch, encode, reparameterize
from .simulator import circuit_density, density_mse
from .transpiler import DEFAULT_MAP, transpile

MSE_TOL = 0.01
NOISE_SCALE = 0.5
MSE_BUCKET = 1e-3


@dataclass(frozen=True)
class Candidate:
    circuit: QuantumCircuit
    density_mse: float
    transpiled_gates: int
    transpiled_depth: int
    # (encoding index, decoding index, noise scale)
    provenance: tuple[int, int, float]

    def to_json(self) -> dict:
        return {
            "circuit": self.circuit.to_json(),
            "density_mse": self.density_mse,
            "transpiled_gates": self.transpiled_gates,
            "transpiled_depth": self.transpiled_depth,
            "provenance": list(self.provenance),
        }


@dataclass(frozen=True)
class Target:
    """Where candidates are measured: coupling map and optimisation level."""

    coupling_map: object = DEFAULT_MAP
    opt: int = 1

    def metrics(self, circuit: QuantumCircuit) -> tuple[int, int]:
        t = transpile(circuit, self.coupling_map, self.opt)
        return t.transpiled_gate_count, t.depth


def score(source: QuantumCircuit, circuits, provenance, target: Target, source_rho=None) -> list[Candidate]:
    rho = circuit_density(source) if source_rho is None else source_rho
    out = []
    for c, prov in zip(circuits, provenance):
        gates, d = target.metrics(c)
        out.append(Candidate(c, density_mse(rho, circuit_density(c)), gates, d, prov))
    return out


def reconstruct(
    circuit: QuantumCircuit,
    model: GraphVAE,
    n_enc: int = 3,
    n_dec: int = 3,
    rng: np.random.Generator | None = None,
    target: Target | None = None,
) -> list[Candidate]:
    """``n_enc`` latent draws times ``n_dec`` sampled decodes each.

    Decodes are capped at the source gate count.
    """
    rng = np.random.default_rng(rng)
    target = target or Target()
    mu, logvar = encode(model, circuit)
    zs = np.stack([reparameterize(mu, logvar, rng) for _ in range(n_enc)])
    rows = np.repeat(zs, n_dec, axis=0)
    dags = decode_batch(model, rows, circuit.num_qubits, len(circuit.gates), "sample", rng)
    prov = [(i, j, 0.0) for i in range(n_enc) for j in range(n_dec)]
    return score(circuit, [dag_to_circuit(d) for d in dags], prov, target)


def rank_key(c: Candidate) -> tuple[int, int, int]:
    return (math.floor(c.density_mse / MSE_BUCKET), c.transpiled_gates, c.transpiled_depth)


def perturb_search(
    circuit: QuantumCircuit,
    model: GraphVAE,
    k: int = 100,
    noise_scale: float = NOISE_SCALE,
    rng: np.random.Generator | None = None,
    target: Target | None = None,
    mode: str = "greedy",
    max_gates: int | None = None,
) -> list[Candidate]:
    """Decode ``k`` perturbations ``mu + noise_scale * eps`` of the latent mean.

    Candidates come back sorted by (density-MSE bucket of width 1e-3,
    transpiled gates, transpiled depth), ties kept in sample order.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    rng = np.random.default_rng(rng)
    target = target or Target()
    mu, _ = encode(model, circuit)
    zs = mu + noise_scale * rng.standard_normal((k, mu.shape[0]))
    cap = len(circuit.gates) if max_gates is None else max_gates
    dags = decode_batch(model, zs, circuit.num_qubits, cap, mode, rng)
    cands = score(circuit, [dag_to_circuit(d) for d in dags], [(i, 0, noise_scale) for i in range(k)], target)
    return sorted(cands, key=rank_key)


def select_best(candidates, mse_tol: float = MSE_TOL, max_gates: int | None = None) -> Candidate | None:
    """Fewest transpiled gates, then depth, among candidates within ``mse_tol``.

    ``max_gates`` additionally drops candidates that transpile to more gates
    than that (normally the source's transpiled count).
    """
    best = None
    best_key = None
    for c in candidates:
        if c.density_mse > mse_tol:
            continue
        if max_gates is not None and c.transpiled_gates > max_gates:
            continue
        key = (c.transpiled_gates, c.transpiled_depth, c.provenance[:2])
        if best is None or key < best_key:
            best, best_key = c, key
    return best


@dataclass(frozen=True)
class Block:
    qubits: tuple[int, ...]  # global qubit for each local index
    circuit: QuantumCircuit


def block_partition(circuit: QuantumCircuit, max_block_qubits: int = 5) -> list[Block]:
    """Greedy left-to-right slicing into blocks touching at most
    ``max_block_qubits`` qubits each."""
    if max_block_qubits < 2:
        raise ValueError("max_block_qubits must be >= 2")
    groups: list[list[GateApplication]] = []
    support: set[int] = set()
    for g in circuit.gates:
        if groups and len(support | set(g.qubits)) <= max_block_qubits:
            groups[-1].append(g)
            support |= set(g.qubits)
        else:
            groups.append([g])
            support = set(g.qubits)
    blocks = []
    for gates in groups:
        qubits = tuple(sorted({q for g in gates for q in g.qubits}))
        local = {q: i for i, q in enumerate(qubits)}
        sub = QuantumCircuit(len(qubits), tuple(GateApplication(g.kind, tuple(local[q] for q in g.qubits)) for g in gates))
        blocks.append(Block(qubits, sub))
    return blocks


def reassemble(blocks: list[Block], num_qubits: int) -> QuantumCircuit:
    gates = []
    for b in blocks:
        gates.extend(GateApplication(g.kind, tuple(b.qubits[q] for q in g.qubits)) for g in b.circuit.gates)
    return QuantumCircuit(num_qubits, tuple(gates))


def optimize_blocks(
    circuit: QuantumCircuit,
    models_by_size: Mapping[int, GraphVAE],
    mse_tol: float = MSE_TOL,
    k: int = 100,
    noise_scale: float = NOISE_SCALE,
    rng: np.random.Generator | None = None,
    target: Target | None = None,
    max_block_qubits: int = 5,
) -> list[tuple[Block, Block]]:
    """``(source block, chosen block)`` pairs in circuit order.

    A block is replaced by its best candidate within ``mse_tol`` whose
    transpiled gate count does not exceed the source block's. Equivalence is
    checked on the block's own qubits from |0...0>. Blocks whose width has no
    model, or with no passing candidate, are kept.
    """
    rng = np.random.default_rng(rng)
    target = target or Target()
    pairs = []
    for block in block_partition(circuit, max_block_qubits):
        model = models_by_size.get(block.circuit.num_qubits)
        if model is None or not block.circuit.gates:
            pairs.append((block, block))
            continue
        src_gates, _ = target.metrics(block.circuit)
        cands = perturb_search(block.circuit, model, k, noise_scale, rng, target)
        best = select_best(cands, mse_tol, max_gates=src_gates)
        pairs.append((block, block if best is None else Block(block.qubits, best.circuit)))
    return pairs


def block_optimize(
    circuit: QuantumCircuit,
    models_by_size: Mapping[int, GraphVAE],
    mse_tol: float = MSE_TOL,
    k: int = 100,
    noise_scale: float = NOISE_SCALE,
    rng: np.random.Generator | None = None,
    target: Target | None = None,
    max_block_qubits: int = 5,
) -> QuantumCircuit:
    """Block-wise search for wide circuits; see :func:`optimize_blocks`."""
    pairs = optimize_blocks(circuit, models_by_size, mse_tol, k, noise_scale, rng, target, max_block_qubits)
    return reassemble([new for _, new in pairs], circuit.num_qubits)


def search_report(
    circuit: QuantumCircuit,
    candidates,
    mse_tol: float = MSE_TOL,
    target: Target | None = None,
) -> dict:
    """Per-circuit JSON payload: source metrics, every candidate and the pick."""
    target = target or Target()
    gates, d = target.metrics(circuit)
    best = select_best(candidates, mse_tol, max_gates=gates)
    return {
        "source": {"circuit": circuit.to_json(), "transpiled_gates": gates, "transpiled_depth": d},
        "mse_tol": mse_tol,
        "candidates": [c.to_json() for c in candidates],
        "selected": None if best is None else best.to_json(),
    }

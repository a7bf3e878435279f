"""Dense statevector / density-matrix simulation.

Qubit 0 is the most significant bit of the basis index, matching the
operand ordering used by the two-qubit gate matrices.
"""
from __future__ import annotations

import json

import numpy as np

from .exceptions import DimensionMismatch, OperandOutOfRange, TooLarge
from .gates import GateKind, gate_unitary

MAX_QUBITS = 12
UNITARY_MAX_QUBITS = 6


def zero_state(num_qubits: int) -> np.ndarray:
    if num_qubits > MAX_QUBITS:
        raise TooLarge(f"{num_qubits} qubits exceeds the simulator cap of {MAX_QUBITS}")
    state = np.zeros(2**num_qubits, dtype=complex)
    state[0] = 1.0
    return state


def _as_matrix(gate) -> np.ndarray:
    if isinstance(gate, np.ndarray):
        return gate
    return gate_unitary(GateKind(gate))


def apply_gate(state: np.ndarray, gate, qubits) -> np.ndarray:
    """Apply a gate (a :class:`GateKind`, its name, or a matrix) to ``qubits``."""
    n = int(np.log2(state.shape[0]))
    qubits = tuple(int(q) for q in qubits)
    if any(q < 0 or q >= n for q in qubits) or len(set(qubits)) != len(qubits):
        raise OperandOutOfRange(f"operands {qubits} invalid for {n} qubits")
    u = _as_matrix(gate)
    k = len(qubits)
    if u.shape != (2**k, 2**k):
        raise DimensionMismatch(f"{u.shape} matrix applied to {k} qubit(s)")
    psi = state.reshape((2,) * n)
    psi = np.tensordot(u.reshape((2,) * (2 * k)), psi, axes=(list(range(k, 2 * k)), list(qubits)))
    # tensordot puts the gate's output axes first
    psi = np.moveaxis(psi, list(range(k)), list(qubits))
    return psi.reshape(-1)


def simulate(circuit, initial: np.ndarray | None = None) -> np.ndarray:
    """Final statevector of ``circuit`` started from |0...0> (or ``initial``)."""
    state = zero_state(circuit.num_qubits) if initial is None else np.asarray(initial, dtype=complex)
    for g in circuit.gates:
        state = apply_gate(state, g.matrix, g.qubits)
    return state


def density_matrix(state: np.ndarray) -> np.ndarray:
    return np.outer(state, state.conj())


def circuit_density(circuit) -> np.ndarray:
    return density_matrix(simulate(circuit))


def density_mse(a: np.ndarray, b: np.ndarray) -> float:
    """Mean squared modulus of the entrywise difference."""
    if a.shape != b.shape:
        raise DimensionMismatch(f"{a.shape} vs {b.shape}")
    d = a - b
    return float(np.mean(d.real**2 + d.imag**2))


def circuit_mse(a, b) -> float:
    """Density MSE between the output states of two circuits."""
    return density_mse(circuit_density(a), circuit_density(b))


def embed(u: np.ndarray, qubits, num_qubits: int) -> np.ndarray:
    """Full ``2^n x 2^n`` matrix of ``u`` acting on ``qubits``."""
    dim = 2**num_qubits
    cols = [apply_gate(col, u, qubits) for col in np.eye(dim, dtype=complex)]
    return np.array(cols).T


def circuit_unitary(circuit, max_qubits: int = UNITARY_MAX_QUBITS) -> np.ndarray:
    n = circuit.num_qubits
    if n > max_qubits:
        raise TooLarge(f"circuit_unitary capped at {max_qubits} qubits, got {n}")
    u = np.eye(2**n, dtype=complex)
    for g in circuit.gates:
        u = embed(g.matrix, g.qubits, n) @ u
    return u


def phase_equivalent(u: np.ndarray, v: np.ndarray, tol: float = 1e-9) -> bool:
    """True when ``u = c v`` for some unit scalar ``c``, up to ``tol`` (max-norm)."""
    u = np.asarray(u)
    v = np.asarray(v)
    if u.shape != v.shape:
        raise DimensionMismatch(f"{u.shape} vs {v.shape}")
    i, j = np.unravel_index(np.argmax(np.abs(v)), v.shape)
    if abs(v[i, j]) == 0:
        return bool(np.max(np.abs(u)) <= tol)
    c = u[i, j] / v[i, j]
    if abs(c) == 0:
        return False
    c = c / abs(c)
    return bool(np.max(np.abs(u - c * v)) <= tol)


def density_to_json(rho: np.ndarray) -> str:
    """Row-major nested list of ``[re, im]`` pairs."""
    return json.dumps([[[float(x.real), float(x.imag)] for x in row] for row in rho])


def density_from_json(text: str) -> np.ndarray:
    data = json.loads(text)
    return np.array([[complex(re, im) for re, im in row] for row in data])

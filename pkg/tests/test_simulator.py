import numpy as np
import pytest

from circuitvae.circuit import QuantumCircuit, random_circuit
from circuitvae.exceptions import DimensionMismatch, OperandOutOfRange, TooLarge
from circuitvae.simulator import (
    apply_gate,
    circuit_unitary,
    density_from_json,
    density_matrix,
    density_mse,
    density_to_json,
    phase_equivalent,
    simulate,
    zero_state,
)

from oracles import mse_oracle, state_oracle, unitary_oracle

S2 = 1 / np.sqrt(2)


def ket(bits: str) -> np.ndarray:
    v = np.zeros(2 ** len(bits), dtype=complex)
    v[int(bits, 2)] = 1
    return v


def test_single_gate_examples():
    np.testing.assert_allclose(apply_gate(ket("0"), "x", [0]), ket("1"))
    np.testing.assert_allclose(apply_gate(ket("0"), "h", [0]), [S2, S2])
    np.testing.assert_allclose(apply_gate(ket("10"), "cx", [0, 1]), ket("11"))
    np.testing.assert_allclose(apply_gate(ket("01"), "cx", [0, 1]), ket("01"))
    np.testing.assert_allclose(apply_gate(ket("01"), "cx", [1, 0]), ket("11"))


def test_operand_errors():
    with pytest.raises(OperandOutOfRange):
        apply_gate(ket("00"), "x", [2])
    with pytest.raises(OperandOutOfRange):
        apply_gate(ket("00"), "cx", [1, 1])
    with pytest.raises(DimensionMismatch):
        apply_gate(ket("00"), np.eye(4), [0])
    with pytest.raises(TooLarge):
        zero_state(13)


def test_simulate_examples():
    np.testing.assert_array_equal(simulate(QuantumCircuit(2)), ket("00"))
    bell = simulate(QuantumCircuit.from_list(2, [("h", 0), ("cx", 0, 1)]))
    np.testing.assert_allclose(bell, [S2, 0, 0, S2], atol=1e-15)


def test_density_examples():
    np.testing.assert_array_equal(density_matrix(ket("0")), [[1, 0], [0, 0]])
    np.testing.assert_array_equal(density_matrix(ket("1")), [[0, 0], [0, 1]])
    np.testing.assert_allclose(density_matrix(np.array([S2, S2])), [[0.5, 0.5], [0.5, 0.5]])


def test_density_mse_examples():
    rx = density_matrix(apply_gate(ket("0"), "x", [0]))
    rz = density_matrix(apply_gate(ket("0"), "z", [0]))
    assert density_mse(rx, rz) == pytest.approx(0.5, abs=1e-15)
    r0 = density_matrix(ket("0"))
    rh = density_matrix(apply_gate(ket("0"), "h", [0]))
    assert density_mse(r0, rh) == pytest.approx(0.25, abs=1e-15)
    assert density_mse(r0, r0) == 0.0
    with pytest.raises(DimensionMismatch):
        density_mse(r0, np.eye(4))


def test_density_mse_complex_entries():
    a = np.array([[0.5, 0.5j], [-0.5j, 0.5]])
    b = np.array([[0.5, 0.5], [0.5, 0.5]])
    assert density_mse(a, b) == pytest.approx(mse_oracle(a, b), abs=1e-15)


@pytest.mark.parametrize("seed", range(30))
def test_simulate_matches_oracle(seed):
    c = random_circuit(1 + seed % 3, 12, seed)
    np.testing.assert_allclose(simulate(c), state_oracle(c), atol=1e-10)
    np.testing.assert_allclose(circuit_unitary(c), unitary_oracle(c), atol=1e-10)


def test_unitary_examples():
    np.testing.assert_array_equal(circuit_unitary(QuantumCircuit(2)), np.eye(4))
    np.testing.assert_array_equal(circuit_unitary(QuantumCircuit.from_list(1, [("x", 0)])), [[0, 1], [1, 0]])
    swap = circuit_unitary(QuantumCircuit.from_list(2, [("swap", 0, 1)]))
    three = circuit_unitary(QuantumCircuit.from_list(2, [("cx", 0, 1), ("cx", 1, 0), ("cx", 0, 1)]))
    np.testing.assert_allclose(swap, three, atol=1e-10)
    with pytest.raises(TooLarge):
        circuit_unitary(QuantumCircuit(7))


def test_phase_equivalent():
    u = circuit_unitary(random_circuit(2, 10, 3))
    assert phase_equivalent(u, u)
    assert phase_equivalent(u, -u)
    assert phase_equivalent(u, np.exp(0.7j) * u)
    assert not phase_equivalent(np.array([[0, 1], [1, 0]]), np.array([[1, 0], [0, -1]]))
    with pytest.raises(DimensionMismatch):
        phase_equivalent(np.eye(2), np.eye(4))


def test_global_phase_invariance():
    psi = simulate(random_circuit(3, 10, 4))
    c = np.exp(1.234j)
    np.testing.assert_allclose(density_matrix(psi), density_matrix(psi * c), atol=1e-15)


def test_density_json_round_trip():
    rho = density_matrix(simulate(random_circuit(2, 6, 5)))
    np.testing.assert_array_equal(density_from_json(density_to_json(rho)), rho)

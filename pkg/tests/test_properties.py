import numpy as np
from hypothesis import given
from hypothesis import strategies as st

from circuitvae.circuit import GateApplication, QuantumCircuit
from circuitvae.dag import circuit_to_dag, dag_to_circuit, validate_dag, wire_labels, topological_order
from circuitvae.gates import ALL_KINDS
from circuitvae.models import GraphVAE, ModelConfig, decode
from circuitvae.search import block_partition, reassemble
from circuitvae.simulator import circuit_density, density_mse, simulate
from circuitvae.transpiler import depth, gate_count, logical_state, peephole, transpile
from circuitvae.simulator import density_matrix


@st.composite
def circuits(draw, min_qubits=1, max_qubits=4, max_gates=20):
    n = draw(st.integers(min_qubits, max_qubits))
    kinds = [k for k in ALL_KINDS if k.arity <= n]
    gates = []
    for _ in range(draw(st.integers(0, max_gates))):
        k = draw(st.sampled_from(kinds))
        qs = draw(st.permutations(range(n)))[: k.arity]
        gates.append(GateApplication(k, tuple(qs)))
    return QuantumCircuit(n, tuple(gates))


@given(circuits())
def test_dag_invariants_and_round_trip(c):
    d = circuit_to_dag(c)
    validate_dag(d)
    order = topological_order(d)
    assert order[0] == 0 and order[-1] == d.end
    labels = wire_labels(d, order)
    # each prefix leaves one dangling port per qubit
    assert sorted(labels[(s, p)] for s, p, dst, _ in d.edges if dst == d.end) == list(range(c.num_qubits))
    back = dag_to_circuit(d)
    assert density_mse(circuit_density(c), circuit_density(back)) == 0.0


@given(circuits())
def test_norm_preserved(c):
    assert abs(np.linalg.norm(simulate(c)) - 1) < 1e-10


@given(circuits(min_qubits=2, max_qubits=2), circuits(min_qubits=2, max_qubits=2), circuits(min_qubits=2, max_qubits=2))
def test_density_mse_pseudometric(a, b, c):
    ra, rb, rc = circuit_density(a), circuit_density(b), circuit_density(c)
    assert density_mse(ra, rb) == density_mse(rb, ra)
    assert density_mse(ra, ra) == 0
    # the root of the MSE is a scaled Frobenius distance
    dab, dbc, dac = (np.sqrt(density_mse(x, y)) for x, y in ((ra, rb), (rb, rc), (ra, rc)))
    assert dac <= dab + dbc + 1e-12


@given(circuits(max_qubits=4, max_gates=16), st.sampled_from(["line", "heavy-hex-12", "ring"]), st.sampled_from([0, 1]))
def test_transpile_equivalence(c, cmap, opt):
    t = transpile(c, cmap, opt)
    assert density_mse(circuit_density(c), density_matrix(logical_state(t))) < 1e-9
    assert depth(t.circuit) <= gate_count(t.circuit)


@given(circuits())
def test_peephole_properties(c):
    p = peephole(c)
    assert gate_count(p) <= gate_count(c)
    assert peephole(p) == p
    assert density_mse(circuit_density(c), circuit_density(p)) < 1e-10


@given(circuits(min_qubits=6, max_qubits=8, max_gates=40), st.integers(2, 5))
def test_block_round_trip(c, width):
    blocks = block_partition(c, width)
    assert all(b.circuit.num_qubits <= width for b in blocks)
    assert reassemble(blocks, c.num_qubits) == c


_MODEL = GraphVAE(ModelConfig(hidden_dim=8, latent_dim=4), seed=0)


@given(st.integers(1, 6), st.integers(0, 12), st.integers(0, 2**32 - 1), st.sampled_from(["greedy", "sample"]))
def test_decoder_totality(n, cap, seed, mode):
    rng = np.random.default_rng(seed)
    dag = decode(_MODEL, 3 * rng.standard_normal(4), n, cap, mode, rng)
    validate_dag(dag)
    assert dag.num_qubits == n and dag.num_gates <= cap
    assert sum(1 for e in dag.edges if e[2] == dag.end) == n
    dag_to_circuit(dag)

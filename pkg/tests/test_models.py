import math

import numpy as np
import pytest
import torch

from circuitvae.circuit import QuantumCircuit, random_circuit
from circuitvae.dag import circuit_to_dag, dag_to_circuit, validate_dag
from circuitvae.gates import ONE_QUBIT_KINDS
from circuitvae.models import (
    END_TYPE,
    START_TYPE,
    GraphVAE,
    ModelConfig,
    decode,
    decode_batch,
    encode,
    kld,
    load_checkpoint,
    reparameterize,
    save_checkpoint,
    type_mask,
)
from circuitvae.exceptions import MissingCheckpoint, MixedQubitCounts

VARIANTS = ("gru", "gcn", "deepgmg")


def small(variant="gru", seed=0, **kw):
    kw.setdefault("hidden_dim", 16)
    kw.setdefault("latent_dim", 8)
    return GraphVAE(ModelConfig(variant=variant, **kw), seed=seed)


def test_config_validation():
    with pytest.raises(ValueError):
        ModelConfig(variant="lstm")
    with pytest.raises(ValueError):
        ModelConfig(hidden_dim=0)
    with pytest.raises(ValueError):
        ModelConfig(temperature=0)
    cfg = ModelConfig(hidden_dim=5)
    assert cfg.node_type_count == 24
    assert ModelConfig.from_dict(cfg.to_dict()) == cfg


@pytest.mark.parametrize("variant", VARIANTS)
def test_encode_shape_and_determinism(variant):
    m = small(variant)
    empty = QuantumCircuit(2)
    mu, logvar = encode(m, empty)
    assert mu.shape == logvar.shape == (8,)
    assert np.all(np.isfinite(mu)) and np.all(np.isfinite(logvar))
    c = random_circuit(3, 12, 0)
    a = encode(m, c)
    b = encode(small(variant), c)
    np.testing.assert_array_equal(a[0], b[0])
    assert not np.array_equal(a[0], encode(small(variant, seed=1), c)[0])


@pytest.mark.parametrize("variant", VARIANTS)
def test_independent_gate_order_invariance(variant):
    m = small(variant)
    a = QuantumCircuit.from_list(2, [("x", 0), ("h", 1), ("cx", 0, 1)])
    b = QuantumCircuit.from_list(2, [("h", 1), ("x", 0), ("cx", 0, 1)])
    np.testing.assert_allclose(encode(m, a)[0], encode(m, b)[0], atol=1e-6)


@pytest.mark.parametrize("variant", VARIANTS)
def test_batched_encode_matches_single(variant):
    m = small(variant)
    cs = [random_circuit(3, g, s) for s, g in enumerate((4, 9, 0, 15))]
    mu, _ = m.encode(cs)
    for i, c in enumerate(cs):
        np.testing.assert_allclose(mu[i].detach().numpy(), encode(m, c)[0], atol=1e-5)


def test_gcn_rounds():
    chain = QuantumCircuit.from_list(1, [(k.value, 0) for k in ONE_QUBIT_KINDS[:8]])
    empty = QuantumCircuit(1)
    outs = {r: small("gcn", gcn_rounds=r) for r in (0, 1, 3)}
    # same seed and shapes: weights are identical across round counts
    chain_mu = {r: encode(m, chain)[0] for r, m in outs.items()}
    empty_mu = {r: encode(m, empty)[0] for r, m in outs.items()}
    assert not np.allclose(chain_mu[0], chain_mu[3])
    assert not np.allclose(chain_mu[1], chain_mu[3])
    np.testing.assert_allclose(empty_mu[0], empty_mu[3], atol=1e-7)


def test_gcn_zero_rounds_reads_end_predecessor_types():
    m = small("gcn", gcn_rounds=0)
    a = QuantumCircuit.from_list(1, [("x", 0), ("h", 0)])
    b = QuantumCircuit.from_list(1, [("y", 0), ("h", 0)])
    c = QuantumCircuit.from_list(1, [("x", 0), ("s", 0)])
    np.testing.assert_allclose(encode(m, a)[0], encode(m, b)[0], atol=1e-7)
    assert not np.allclose(encode(m, a)[0], encode(m, c)[0])


def test_deepgmg_port_sensitivity():
    m = small("deepgmg")
    a = QuantumCircuit.from_list(2, [("cx", 0, 1)])
    b = QuantumCircuit.from_list(2, [("cx", 1, 0)])
    assert not np.allclose(encode(m, a)[0], encode(m, b)[0])


def test_reparameterize():
    mu = np.array([0.5, -1.0, 2.0])
    z = reparameterize(mu, np.full(3, -40.0), np.random.default_rng(0))
    np.testing.assert_allclose(z, mu, atol=1e-8)
    a = reparameterize(mu, np.zeros(3), np.random.default_rng(5))
    b = reparameterize(mu, np.zeros(3), np.random.default_rng(5))
    np.testing.assert_array_equal(a, b)
    logvar = np.log(np.array([0.25, 1.0, 4.0]))
    rng = np.random.default_rng(11)
    draws = np.stack([reparameterize(mu, logvar, rng) for _ in range(100_000)])
    sigma = np.exp(0.5 * logvar)
    assert np.all(np.abs(draws.mean(0) - mu) < 3 * sigma / math.sqrt(100_000))


def test_kld():
    assert kld(np.zeros(4), np.zeros(4)) == 0.0
    assert kld(np.ones(2), np.zeros(2)) == pytest.approx(1.0)
    assert kld(2 * np.ones(2), np.zeros(2)) > kld(np.ones(2), np.zeros(2))
    t = kld(torch.ones(2), torch.zeros(2))
    assert float(t) == pytest.approx(1.0)


def test_type_mask():
    m = type_mask(2, 5)
    assert not m[START_TYPE] and m[END_TYPE] and int(m.sum()) == 23
    one = type_mask(1, 5)
    assert int(one.sum()) == 12
    done = type_mask(3, 0)
    assert int(done.sum()) == 1 and done[END_TYPE]


def _uniform_heads(m: GraphVAE) -> GraphVAE:
    with torch.no_grad():
        for head in (m.decoder.add_node[-1], m.decoder.add_edge[-1]):
            head.weight.zero_()
            head.bias.zero_()
    return m


@torch.no_grad()
def test_uniform_heads_closed_form():
    m = _uniform_heads(small())
    # two qubits: 23 legal types per step, 2 then 1 free slots for operands
    c = QuantumCircuit.from_list(2, [("x", 0)])
    assert float(m.structural_loss([c])) == pytest.approx(2 * math.log(23) + math.log(2), rel=1e-5)
    c = QuantumCircuit.from_list(2, [("cx", 1, 0), ("h", 1)])
    expected = 3 * math.log(23) + math.log(2) + math.log(1) + math.log(2)
    assert float(m.structural_loss([c])) == pytest.approx(expected, rel=1e-5)
    one = QuantumCircuit.from_list(1, [("x", 0)])
    assert float(m.structural_loss([one])) == pytest.approx(2 * math.log(12), rel=1e-5)


@torch.no_grad()
def test_losses_are_per_graph_sums():
    m = small().double()
    cs = [random_circuit(2, g, s) for s, g in enumerate((3, 8, 0, 5))]
    eps = torch.as_tensor(np.random.default_rng(0).standard_normal((4, 8)))
    structural, kl = m.losses(cs, eps)
    for i, c in enumerate(cs):
        s_i, k_i = m.losses([c], eps[i : i + 1])
        assert float(structural[i]) == pytest.approx(float(s_i[0]), rel=1e-10)
        assert float(kl[i]) == pytest.approx(float(k_i[0]), rel=1e-10)
    assert float(m.loss(cs, 0.5, eps)) == pytest.approx(float((structural + 0.5 * kl).sum()), rel=1e-12)
    with pytest.raises(MixedQubitCounts):
        m.losses([random_circuit(2, 3, 0), random_circuit(3, 3, 0)])


@pytest.mark.parametrize("variant", VARIANTS)
def test_decode_contracts(variant, rng):
    m = small(variant)
    for n in (1, 2, 4):
        for cap in (0, 5, 12):
            for mode in ("greedy", "sample"):
                dag = decode(m, rng.standard_normal(8), n, cap, mode, rng)
                validate_dag(dag)
                c = dag_to_circuit(dag)
                assert c.num_qubits == n and len(c.gates) <= cap
                if n == 1:
                    assert all(g.kind.arity == 1 for g in c.gates)
    dag = decode(m, np.zeros(8), 3, 0)
    assert dag.num_gates == 0 and dag.num_qubits == 3


def test_decode_deterministic(rng):
    m = small()
    z = rng.standard_normal((6, 8))
    a = decode_batch(m, z, 3, 10, "sample", np.random.default_rng(3))
    b = decode_batch(m, z, 3, 10, "sample", np.random.default_rng(3))
    assert a == b
    assert decode_batch(m, z, 3, 10) == decode_batch(m, z, 3, 10)
    with pytest.raises(ValueError):
        decode_batch(m, z, 3, -1)


def test_checkpoint_round_trip(tmp_path):
    m = small("deepgmg", seed=4)
    save_checkpoint(m, tmp_path / "ck", {"note": 1})
    manifest = (tmp_path / "ck" / "manifest.json").read_text()
    assert '"dtype": "<f4"' in manifest
    back = load_checkpoint(tmp_path / "ck")
    assert back.config == m.config
    for (k, a), (k2, b) in zip(m.state_dict().items(), back.state_dict().items()):
        assert k == k2
        assert a.numpy().tobytes() == b.numpy().tobytes()
    c = random_circuit(3, 10, 0)
    np.testing.assert_array_equal(encode(m, c)[0], encode(back, c)[0])
    with pytest.raises(MissingCheckpoint):
        load_checkpoint(tmp_path / "nope")


def test_checkpoint_bytes_little_endian(tmp_path):
    m = small()
    save_checkpoint(m, tmp_path)
    name, tensor = next(iter(m.state_dict().items()))
    raw = (tmp_path / f"{name}.bin").read_bytes()
    assert raw == tensor.numpy().astype("<f4").tobytes()
    assert len(raw) == 4 * tensor.numel()

"""The graph VAE: encoder variant + shared constrained decoder."""
from __future__ import annotations

import math

import numpy as np
import torch
from torch import nn

from ..circuit import QuantumCircuit
from ..dag import CircuitDag, circuit_to_dag, dag_to_circuit
from ..exceptions import MixedQubitCounts
from .config import ModelConfig
from .decoder import Decoder
from .encoders import ENCODERS
from .plan import plan_dag


def _init_uniform(module: nn.Module, generator: torch.Generator) -> None:
    """uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) for every parameter."""
    for m in module.modules():
        if isinstance(m, nn.Linear):
            bound = 1 / math.sqrt(m.in_features)
            params = [m.weight] + ([m.bias] if m.bias is not None else [])
        elif isinstance(m, nn.GRUCell):
            with torch.no_grad():
                b_in = 1 / math.sqrt(m.input_size)
                b_h = 1 / math.sqrt(m.hidden_size)
                m.weight_ih.uniform_(-b_in, b_in, generator=generator)
                for p in (m.weight_hh, m.bias_ih, m.bias_hh):
                    p.uniform_(-b_h, b_h, generator=generator)
            continue
        elif isinstance(m, nn.Embedding):
            bound = 1.0
            params = [m.weight]
        else:
            continue
        with torch.no_grad():
            for p in params:
                p.uniform_(-bound, bound, generator=generator)


class GraphVAE(nn.Module):
    def __init__(self, config: ModelConfig | None = None, seed: int = 0):
        super().__init__()
        self.config = config or ModelConfig()
        self.encoder = ENCODERS[self.config.variant](self.config)
        self.decoder = Decoder(self.config)
        _init_uniform(self, torch.Generator().manual_seed(int(seed)))

    def encode(self, dags) -> tuple[torch.Tensor, torch.Tensor]:
        """Batched ``(mu, logvar)``, each ``[B, latent_dim]``."""
        return self.encoder([plan_dag(d) for d in _as_list(dags)])

    def structural_loss(self, dags, eps: torch.Tensor | None = None) -> torch.Tensor:
        """Summed teacher-forced NLL of the node types and input slots."""
        return self.losses(dags, eps)[0].sum()

    def loss(self, dags, beta: float = 0.005, eps: torch.Tensor | None = None) -> torch.Tensor:
        """Summed ``structural + beta * kld`` over the batch."""
        structural, kl = self.losses(dags, eps)
        return (structural + beta * kl).sum()

    def losses(self, dags, eps: torch.Tensor | None = None) -> tuple[torch.Tensor, torch.Tensor]:
        """Per-graph structural loss and KLD, each ``[B]``.

        ``eps`` (``[B, latent_dim]``) reparameterises the latent; without it
        the decoder reads the mean.
        """
        plans = [plan_dag(d) for d in _as_list(dags)]
        n = {p.num_qubits for p in plans}
        if len(n) != 1:
            raise MixedQubitCounts(f"batch mixes qubit counts {sorted(n)}")
        mu, logvar = self.encoder(plans)
        z = mu if eps is None else mu + torch.exp(0.5 * logvar) * eps
        structural, _ = self.decoder.run(z, n.pop(), teacher=[p.sequence for p in plans])
        return structural, 0.5 * torch.sum(torch.exp(logvar) + mu**2 - 1 - logvar, 1)


def _as_list(dags) -> list[CircuitDag]:
    if isinstance(dags, (CircuitDag, QuantumCircuit)):
        dags = [dags]
    return [circuit_to_dag(d) if isinstance(d, QuantumCircuit) else d for d in dags]


def kld(mu, logvar):
    """KL divergence of N(mu, exp(logvar)) from the standard normal."""
    if isinstance(mu, torch.Tensor):
        return 0.5 * torch.sum(torch.exp(logvar) + mu**2 - 1 - logvar)
    mu = np.asarray(mu, dtype=float)
    logvar = np.asarray(logvar, dtype=float)
    return float(0.5 * np.sum(np.exp(logvar) + mu**2 - 1 - logvar))


def encode(model: GraphVAE, dag: CircuitDag | QuantumCircuit) -> tuple[np.ndarray, np.ndarray]:
    """Latent mean and log-variance as float64 arrays."""
    with torch.no_grad():
        mu, logvar = model.encode(dag)
    return mu[0].double().numpy(), logvar[0].double().numpy()


def encode_batch(model: GraphVAE, dags) -> tuple[np.ndarray, np.ndarray]:
    """``[B, latent_dim]`` means and log-variances as float64 arrays."""
    with torch.no_grad():
        mu, logvar = model.encode(dags)
    return mu.double().numpy(), logvar.double().numpy()


def reparameterize(mu, logvar, rng: np.random.Generator) -> np.ndarray:
    mu = np.asarray(mu, dtype=float)
    eps = rng.standard_normal(mu.shape)
    return mu + np.exp(0.5 * np.asarray(logvar, dtype=float)) * eps


def decode(
    model: GraphVAE,
    z,
    n_qubits: int,
    max_gates: int,
    mode: str = "greedy",
    rng: np.random.Generator | None = None,
    temperature: float | None = None,
) -> CircuitDag:
    """Free-running decode of ``z`` into a valid DAG with at most ``max_gates`` gates."""
    return decode_batch(model, np.asarray(z)[None], n_qubits, max_gates, mode, rng, temperature)[0]


def decode_batch(
    model: GraphVAE,
    zs,
    n_qubits: int,
    max_gates: int,
    mode: str = "greedy",
    rng: np.random.Generator | None = None,
    temperature: float | None = None,
) -> list[CircuitDag]:
    """Decode each row of ``zs`` (``[B, D]``) in lockstep.

    Sampling draws from ``rng`` row by row within each step, so results
    depend on the batch composition but are reproducible for a given one.
    """
    if max_gates < 0:
        raise ValueError("max_gates must be >= 0")
    dtype = next(model.parameters()).dtype
    with torch.no_grad():
        _, traces = model.decoder.run(
            torch.as_tensor(np.asarray(zs), dtype=dtype),
            n_qubits,
            max_gates=max_gates,
            mode=mode,
            rng=rng,
            temperature=temperature,
        )
    return [t.to_dag() for t in traces]


def reconstruct_greedy(model: GraphVAE, circuit: QuantumCircuit, max_gates: int | None = None) -> QuantumCircuit:
    """Encode to the latent mean and decode greedily (free-run reconstruction)."""
    mu, _ = encode(model, circuit)
    cap = len(circuit.gates) if max_gates is None else max_gates
    return dag_to_circuit(decode(model, mu, circuit.num_qubits, cap))

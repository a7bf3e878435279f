"""Model training: teacher-forced structural loss plus weighted KLD, Adam."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace

import numpy as np
import torch

from .circuit import QuantumCircuit
from .dag import circuit_to_dag, dag_to_circuit
from .exceptions import MixedQubitCounts
from .models import GraphVAE, ModelConfig, decode_batch, encode_batch
from .simulator import circuit_mse

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class TrainConfig:
    epochs: int = 100
    batch_size: int = 32
    learning_rate: float = 1e-3
    beta: float = 0.005
    seed: int = 0
    model_variant: str = "gru"

    def __post_init__(self):
        if self.epochs < 0 or self.batch_size < 1 or self.learning_rate <= 0 or self.beta < 0:
            raise ValueError(f"invalid training hyperparameters: {self}")


@dataclass
class TrainResult:
    model: GraphVAE
    history: dict[str, list[float]] = field(default_factory=dict)


def reconstruct_batch(model: GraphVAE, circuits: list[QuantumCircuit]) -> list[QuantumCircuit]:
    """Greedy decode from the latent mean, capped at each source's gate count."""
    out: list[QuantumCircuit | None] = [None] * len(circuits)
    groups: dict[tuple[int, int], list[int]] = {}
    for i, c in enumerate(circuits):
        groups.setdefault((c.num_qubits, len(c.gates)), []).append(i)
    for (n, g), idx in sorted(groups.items()):
        mu, _ = encode_batch(model, [circuits[i] for i in idx])
        for i, dag in zip(idx, decode_batch(model, mu, n, g, "greedy")):
            out[i] = dag_to_circuit(dag)
    return out


def reconstruction_mse(model: GraphVAE, circuits: list[QuantumCircuit]) -> list[float]:
    """Density MSE of each circuit against its free-run reconstruction."""
    return [circuit_mse(c, r) for c, r in zip(circuits, reconstruct_batch(model, circuits))]


def _check_dataset(circuits) -> int:
    if not circuits:
        raise ValueError("empty dataset")
    sizes = {c.num_qubits for c in circuits}
    if len(sizes) != 1:
        raise MixedQubitCounts(f"dataset mixes qubit counts {sorted(sizes)}")
    return sizes.pop()


def train(
    dataset: list[QuantumCircuit],
    config: TrainConfig | None = None,
    model_config: ModelConfig | None = None,
    validation: list[QuantumCircuit] | None = None,
    model: GraphVAE | None = None,
) -> TrainResult:
    """Fit a graph VAE to ``dataset``.

    Minimises mean(structural_loss + beta * kld) with Adam. History records
    the mean per-circuit training loss per epoch and, when ``validation`` is
    given, its mean free-run reconstruction density MSE.
    """
    config = config or TrainConfig()
    _check_dataset(dataset)
    if validation:
        _check_dataset(list(dataset) + list(validation))
    model_config = replace(model_config or ModelConfig(), variant=config.model_variant)
    if model is None:
        model = GraphVAE(model_config, seed=config.seed)
    rng = np.random.default_rng(config.seed)
    dags = [circuit_to_dag(c) for c in dataset]
    optimizer = torch.optim.Adam(model.parameters(), lr=config.learning_rate)
    history: dict[str, list[float]] = {"loss": []}
    if validation:
        history["val_mse"] = []
    D = model.config.latent_dim
    dtype = next(model.parameters()).dtype
    for epoch in range(config.epochs):
        model.train()
        order = rng.permutation(len(dags))
        total = 0.0
        for start in range(0, len(order), config.batch_size):
            batch = [dags[i] for i in order[start : start + config.batch_size]]
            eps = torch.as_tensor(rng.standard_normal((len(batch), D)), dtype=dtype)
            loss = model.loss(batch, config.beta, eps)
            optimizer.zero_grad()
            (loss / len(batch)).backward()
            optimizer.step()
            total += float(loss.detach())
        history["loss"].append(total / len(dags))
        if not np.isfinite(history["loss"][-1]):
            raise FloatingPointError(f"non-finite loss at epoch {epoch}")
        if validation:
            model.eval()
            history["val_mse"].append(float(np.mean(reconstruction_mse(model, validation))))
        log.debug("epoch %d loss %.4f", epoch, history["loss"][-1])
    model.eval()
    return TrainResult(model, history)

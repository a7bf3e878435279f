"""scikit-learn style wrappers around training, search and transpilation."""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .circuit import QuantumCircuit
from .dag import dag_to_circuit
from .models import ModelConfig, decode_batch, encode_batch, load_checkpoint, save_checkpoint
from .models.checkpoint import checkpoint_extra
from .search import MSE_TOL, NOISE_SCALE, Target, perturb_search, select_best
from .training import TrainConfig, reconstruct_batch, reconstruction_mse, train
from .transpiler import DEFAULT_MAP, CouplingMap, transpile
from .validation import check_circuit, check_circuits, check_latent


class CircuitVAE(BaseEstimator, TransformerMixin):
    """Graph VAE over circuit DAGs.

    ``transform`` maps circuits to latent means, ``predict`` returns greedy
    reconstructions and ``optimize`` runs the perturb-and-select search.
    """

    def __init__(
        self,
        variant="gru",
        hidden_dim=128,
        latent_dim=32,
        gcn_rounds=3,
        epochs=100,
        batch_size=32,
        learning_rate=1e-3,
        beta=0.005,
        random_state=0,
        coupling_map=DEFAULT_MAP,
        opt=1,
        n_samples=100,
        noise_scale=NOISE_SCALE,
        mse_tol=MSE_TOL,
    ):
        self.variant = variant
        self.hidden_dim = hidden_dim
        self.latent_dim = latent_dim
        self.gcn_rounds = gcn_rounds
        self.epochs = epochs
        self.batch_size = batch_size
        self.learning_rate = learning_rate
        self.beta = beta
        self.random_state = random_state
        self.coupling_map = coupling_map
        self.opt = opt
        self.n_samples = n_samples
        self.noise_scale = noise_scale
        self.mse_tol = mse_tol

    def _model_config(self) -> ModelConfig:
        return ModelConfig(
            variant=self.variant,
            hidden_dim=self.hidden_dim,
            latent_dim=self.latent_dim,
            gcn_rounds=self.gcn_rounds,
        )

    def _train_config(self) -> TrainConfig:
        return TrainConfig(
            epochs=self.epochs,
            batch_size=self.batch_size,
            learning_rate=self.learning_rate,
            beta=self.beta,
            seed=self.random_state,
            model_variant=self.variant,
        )

    def fit(self, X, y=None, validation=None):
        circuits = check_circuits(X, same_qubits=True)
        val = check_circuits(validation, same_qubits=True) if validation is not None else None
        result = train(circuits, self._train_config(), self._model_config(), validation=val)
        self.model_ = result.model
        self.loss_history_ = result.history["loss"]
        self.val_history_ = result.history.get("val_mse", [])
        self.n_qubits_ = circuits[0].num_qubits
        return self

    def transform(self, X) -> np.ndarray:
        check_is_fitted(self, "model_")
        mu, _ = encode_batch(self.model_, check_circuits(X))
        return mu

    def inverse_transform(self, Z, max_gates: int = 16) -> list[QuantumCircuit]:
        """Greedy decode latent rows into ``n_qubits_``-qubit circuits."""
        check_is_fitted(self, "model_")
        Z = check_latent(Z, self.model_.config.latent_dim)
        return [dag_to_circuit(d) for d in decode_batch(self.model_, Z, self.n_qubits_, max_gates, "greedy")]

    def predict(self, X) -> list[QuantumCircuit]:
        check_is_fitted(self, "model_")
        return reconstruct_batch(self.model_, check_circuits(X))

    def score(self, X, y=None) -> float:
        """Negative mean reconstruction density MSE (higher is better)."""
        check_is_fitted(self, "model_")
        return -float(np.mean(reconstruction_mse(self.model_, check_circuits(X))))

    def optimize(self, circuit, rng=None) -> QuantumCircuit:
        """Best search candidate within ``mse_tol``, else the input circuit."""
        check_is_fitted(self, "model_")
        circuit = check_circuit(circuit)
        target = Target(self.coupling_map, self.opt)
        rng = np.random.default_rng(self.random_state if rng is None else rng)
        cands = perturb_search(circuit, self.model_, self.n_samples, self.noise_scale, rng, target)
        best = select_best(cands, self.mse_tol, max_gates=target.metrics(circuit)[0])
        return circuit if best is None else best.circuit

    def save(self, directory):
        check_is_fitted(self, "model_")
        params = self.get_params()
        if isinstance(params["coupling_map"], CouplingMap):
            params["coupling_map"] = params["coupling_map"].to_json()
        return save_checkpoint(self.model_, directory, {"params": params, "n_qubits": self.n_qubits_})

    @classmethod
    def load(cls, directory) -> "CircuitVAE":
        est_model = load_checkpoint(directory)
        extra = checkpoint_extra(directory)
        est = cls(**extra.get("params", {}))
        est.model_ = est_model
        est.n_qubits_ = extra.get("n_qubits")
        est.loss_history_ = []
        est.val_history_ = []
        return est


class Transpiler(BaseEstimator, TransformerMixin):
    """Stateless transformer: circuits in, transpiled circuits out."""

    def __init__(self, coupling_map=DEFAULT_MAP, opt=1):
        self.coupling_map = coupling_map
        self.opt = opt

    def fit(self, X=None, y=None):
        return self

    def transform(self, X):
        return [transpile(c, self.coupling_map, self.opt) for c in check_circuits(X)]

from __future__ import annotations

from dataclasses import asdict, dataclass, fields

from ..gates import ALL_KINDS

NUM_GATE_TYPES = len(ALL_KINDS)
START_TYPE = NUM_GATE_TYPES
END_TYPE = NUM_GATE_TYPES + 1
NODE_TYPE_COUNT = NUM_GATE_TYPES + 2

VARIANTS = ("gru", "gcn", "deepgmg")


@dataclass(frozen=True)
class ModelConfig:
    """Architecture hyperparameters shared by all three encoder variants.

    ``max_qubits`` bounds the wire-label embedding table; ``qubit_embed_dim``
    is its width.
    """

    variant: str = "gru"
    hidden_dim: int = 128
    latent_dim: int = 32
    gcn_rounds: int = 3
    bidirectional: bool = True
    edge_feature_dim: int = 8
    temperature: float = 1.0
    max_qubits: int = 16
    qubit_embed_dim: int = 8

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"variant must be one of {VARIANTS}, got {self.variant!r}")
        for name in ("hidden_dim", "latent_dim", "edge_feature_dim", "max_qubits", "qubit_embed_dim"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.gcn_rounds < 0:
            raise ValueError("gcn_rounds must be >= 0")
        if self.temperature <= 0:
            raise ValueError("temperature must be positive")

    @property
    def node_type_count(self) -> int:
        return NODE_TYPE_COUNT

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "ModelConfig":
        known = {f.name for f in fields(cls)}
        return cls(**{k: v for k, v in data.items() if k in known})

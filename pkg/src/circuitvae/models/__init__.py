"""Graph encoders, constrained decoder and the VAE wrapper."""
from .checkpoint import load_checkpoint, save_checkpoint
from .config import END_TYPE, NODE_TYPE_COUNT, START_TYPE, VARIANTS, ModelConfig
from .decoder import Decoder, DecodeTrace, type_mask
from .encoders import DeepGMGEncoder, GCNEncoder, GRUEncoder
from .plan import DagPlan, plan_dag
from .vae import GraphVAE, decode, decode_batch, encode, encode_batch, kld, reconstruct_greedy, reparameterize

__all__ = [
    "DagPlan",
    "DecodeTrace",
    "Decoder",
    "DeepGMGEncoder",
    "END_TYPE",
    "GCNEncoder",
    "GRUEncoder",
    "GraphVAE",
    "ModelConfig",
    "NODE_TYPE_COUNT",
    "START_TYPE",
    "VARIANTS",
    "decode",
    "decode_batch",
    "encode",
    "encode_batch",
    "kld",
    "load_checkpoint",
    "plan_dag",
    "reconstruct_greedy",
    "reparameterize",
    "save_checkpoint",
    "type_mask",
]

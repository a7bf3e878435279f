"""Checkpoints: ``manifest.json`` plus one little-endian float32 file per tensor."""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np
import torch

from ..exceptions import MissingCheckpoint
from .config import ModelConfig
from .vae import GraphVAE

MANIFEST = "manifest.json"


def save_checkpoint(model: GraphVAE, directory: str | Path, extra: dict | None = None) -> Path:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    tensors = []
    for name, tensor in model.state_dict().items():
        fname = f"{name}.bin"
        data = tensor.detach().cpu().numpy().astype("<f4")
        (directory / fname).write_bytes(data.tobytes())
        tensors.append({"name": name, "shape": list(data.shape), "file": fname})
    manifest = {"config": model.config.to_dict(), "dtype": "<f4", "tensors": tensors}
    if extra:
        manifest["extra"] = extra
    (directory / MANIFEST).write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return directory


def load_checkpoint(directory: str | Path) -> GraphVAE:
    directory = Path(directory)
    path = directory / MANIFEST
    if not path.exists():
        raise MissingCheckpoint(f"no checkpoint at {directory}")
    manifest = json.loads(path.read_text())
    model = GraphVAE(ModelConfig.from_dict(manifest["config"]))
    state = {}
    for entry in manifest["tensors"]:
        raw = np.frombuffer((directory / entry["file"]).read_bytes(), dtype="<f4")
        state[entry["name"]] = torch.from_numpy(raw.reshape(entry["shape"]).astype(np.float32))
    model.load_state_dict(state)
    return model


def checkpoint_extra(directory: str | Path) -> dict:
    return json.loads((Path(directory) / MANIFEST).read_text()).get("extra", {})

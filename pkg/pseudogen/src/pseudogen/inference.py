"""Checkpoint loading and pseudo-measurement emission."""

from __future__ import annotations

import logging
from pathlib import Path

import numpy as np
import torch

from .model import UNet, UNetConfig
from .tensorio import TensorFormatError, read_header, read_tensor, write_tensor
from .training import file_hash

log = logging.getLogger(__name__)

PROVENANCE = "pseudogen-net"


class CheckpointError(ValueError):
    """Raised when a checkpoint is unreadable or inconsistent."""


def load_checkpoint(path: str | Path) -> tuple[UNet, dict]:
    """Rebuild the model in eval mode; returns (model, info).

    info carries the regime and the checkpoint file's sha256, which is
    stamped into every emitted tensor's metadata.
    """
    path = Path(path)
    try:
        payload = torch.load(path, map_location="cpu", weights_only=True)
    except Exception as exc:
        raise CheckpointError(f"{path}: cannot load checkpoint: {exc}") from exc
    for key in ("state_dict", "unet_config", "regime"):
        if key not in payload:
            raise CheckpointError(f"{path}: checkpoint missing {key!r}")
    model = UNet(UNetConfig(**payload["unet_config"]))
    try:
        model.load_state_dict(payload["state_dict"])
    except RuntimeError as exc:
        raise CheckpointError(f"{path}: state dict mismatch: {exc}") from exc
    model.eval()
    info = {"regime": payload["regime"], "checkpoint_hash": file_hash(path)}
    return model, info


def infer(checkpoint: str | Path, y1_paths: list, out_dir: str | Path) -> list:
    """Emit one y2p tensor per input, named after the input file.

    Inputs must be 2D tensors whose recorded regime (if any) matches
    the checkpoint's. Outputs carry provenance and checkpoint hash in
    their metadata and are deterministic for a fixed checkpoint.
    """
    model, info = load_checkpoint(checkpoint)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    with torch.no_grad():
        for y1_path in y1_paths:
            header = read_header(y1_path)
            recorded = header.get("meta", {}).get("regime")
            if recorded is not None and recorded != info["regime"]:
                raise TensorFormatError(
                    f"{y1_path}: regime {recorded!r} does not match "
                    f"checkpoint regime {info['regime']!r}")
            y1 = read_tensor(y1_path)
            if y1.ndim != 2:
                raise TensorFormatError(
                    f"{y1_path}: expected a 2D tensor, got shape {y1.shape}")
            x = torch.from_numpy(y1[None, None, :, :])
            y2p = model(x)[0, 0].numpy().astype(np.float32)
            out_path = out / Path(y1_path).name
            write_tensor(out_path, y2p, meta={
                "provenance": PROVENANCE,
                "checkpoint_hash": info["checkpoint_hash"],
                "regime": info["regime"],
                "source": Path(y1_path).name,
                "kind": "y2p",
            })
            written.append(out_path)
            log.info("wrote %s", out_path)
    return written

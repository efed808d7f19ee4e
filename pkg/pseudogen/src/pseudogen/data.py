"""Manifest-described (y1, y2) pair loading for training and inference."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np
import torch

from .tensorio import read_tensor

REGIME_ACTIVATIONS = {"incoherent": "sigmoid", "coherent": "relu"}


class ManifestError(ValueError):
    """Raised when a manifest is missing, malformed, or inconsistent."""


def load_manifest(dataset_dir: str | Path) -> dict:
    path = Path(dataset_dir) / "manifest.json"
    if not path.is_file():
        raise ManifestError(f"no manifest.json under {dataset_dir}")
    try:
        manifest = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ManifestError(f"{path}: not valid JSON: {exc}") from exc
    for key in ("regime", "params", "entries"):
        if key not in manifest:
            raise ManifestError(f"{path}: missing key {key!r}")
    if manifest["regime"] not in REGIME_ACTIVATIONS:
        raise ManifestError(
            f"{path}: unknown regime {manifest['regime']!r}")
    return manifest


def split_entries(manifest: dict, split: str) -> list[dict]:
    entries = [e for e in manifest["entries"] if e["split"] == split]
    return entries


def load_pairs(dataset_dir: str | Path, entries: list[dict]) -> tuple:
    """Stack y1/y2 tensors for the entries into [n, 1, h, w] batches."""
    root = Path(dataset_dir)
    y1s, y2s = [], []
    for entry in entries:
        y1s.append(read_tensor(root / entry["y1_path"]))
        y2s.append(read_tensor(root / entry["y2_path"]))
    y1 = torch.from_numpy(np.stack(y1s)[:, None, :, :])
    y2 = torch.from_numpy(np.stack(y2s)[:, None, :, :])
    return y1, y2

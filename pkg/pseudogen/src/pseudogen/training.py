"""Training loop: Adam on mse + alpha * (1 - ssim), with per-epoch
validation metrics, a JSON report, and a hashed checkpoint."""

from __future__ import annotations

import hashlib
import json
import logging
import math
from dataclasses import asdict, dataclass
from pathlib import Path

import torch

from . import losses
from .data import (
    REGIME_ACTIVATIONS,
    ManifestError,
    load_manifest,
    load_pairs,
    split_entries,
)
from .model import UNet, UNetConfig

log = logging.getLogger(__name__)

CHECKPOINT_NAME = "checkpoint.pt"
REPORT_NAME = "report.json"


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = 0.001
    epochs: int = 50
    alpha: float = 1.0
    batch_size: int = 8
    seed: int = 0

    def __post_init__(self):
        if self.epochs < 1:
            raise ValueError(f"epochs must be >= 1, got {self.epochs}")
        if self.alpha < 0:
            raise ValueError(f"alpha must be >= 0, got {self.alpha}")
        if self.batch_size < 1:
            raise ValueError(f"batch_size must be >= 1, "
                             f"got {self.batch_size}")


def file_hash(path: str | Path) -> str:
    digest = hashlib.sha256()
    with Path(path).open("rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _json_value(x: float):
    if math.isinf(x):
        return "inf"
    return x


def _epoch_pass(model, y1, y2, alpha, batch_size, optimizer=None):
    """One pass over the data; returns the sample-weighted mean loss."""
    total, count = 0.0, 0
    for k in range(0, y1.shape[0], batch_size):
        xb = y1[k:k + batch_size]
        yb = y2[k:k + batch_size]
        loss = losses.hybrid_loss(model(xb), yb, alpha)
        if optimizer is not None:
            optimizer.zero_grad()
            loss.backward()
            optimizer.step()
        total += loss.item() * xb.shape[0]
        count += xb.shape[0]
    return total / count


def _validate(model, y1, y2, alpha, batch_size):
    model.eval()
    total_loss, total_ssim, total_psnr, count = 0.0, 0.0, 0.0, 0
    with torch.no_grad():
        for k in range(0, y1.shape[0], batch_size):
            xb = y1[k:k + batch_size]
            yb = y2[k:k + batch_size]
            pred = model(xb)
            total_loss += float(losses.hybrid_loss(pred, yb, alpha)) * xb.shape[0]
            total_ssim += float(losses.ssim(pred, yb)) * xb.shape[0]
            total_psnr += losses.psnr(pred, yb) * xb.shape[0]
            count += xb.shape[0]
    model.train()
    return (total_loss / count, total_ssim / count, total_psnr / count)


def train(dataset_dir: str | Path, unet_cfg: UNetConfig | None = None,
          train_cfg: TrainConfig | None = None,
          out_dir: str | Path = ".") -> dict:
    """Train on the manifest's train split, validate on its val split.

    Writes checkpoint.pt and report.json under out_dir and returns the
    report dict. The checkpoint's regime is the manifest's regime; the
    UNet head must match it (sigmoid for incoherent intensities, relu
    for coherent amplitudes).
    """
    unet_cfg = unet_cfg or UNetConfig()
    train_cfg = train_cfg or TrainConfig()
    manifest = load_manifest(dataset_dir)
    regime = manifest["regime"]
    expected = REGIME_ACTIVATIONS[regime]
    if unet_cfg.final_activation != expected:
        raise ManifestError(
            f"regime {regime!r} needs final_activation {expected!r}, "
            f"got {unet_cfg.final_activation!r}")
    if len(manifest["entries"]) < 16:
        raise ManifestError(
            f"need at least 16 pairs to train, got "
            f"{len(manifest['entries'])}")

    train_entries = split_entries(manifest, "train")
    val_entries = split_entries(manifest, "val")
    if not train_entries or not val_entries:
        raise ManifestError("manifest must provide train and val splits")
    y1_train, y2_train = load_pairs(dataset_dir, train_entries)
    y1_val, y2_val = load_pairs(dataset_dir, val_entries)
    log.info("training on %d pairs, validating on %d (%s regime)",
             y1_train.shape[0], y1_val.shape[0], regime)

    torch.manual_seed(train_cfg.seed)
    model = UNet(unet_cfg)
    model.train()
    optimizer = torch.optim.Adam(model.parameters(),
                                 lr=train_cfg.learning_rate)
    shuffle_rng = torch.Generator().manual_seed(train_cfg.seed)

    rows = []
    for epoch in range(1, train_cfg.epochs + 1):
        order = torch.randperm(y1_train.shape[0], generator=shuffle_rng)
        train_loss = _epoch_pass(model, y1_train[order], y2_train[order],
                                 train_cfg.alpha, train_cfg.batch_size,
                                 optimizer)
        val_loss, val_ssim, val_psnr = _validate(
            model, y1_val, y2_val, train_cfg.alpha, train_cfg.batch_size)
        rows.append({
            "epoch": epoch,
            "train_loss": train_loss,
            "val_loss": val_loss,
            "val_ssim": val_ssim,
            "val_psnr_db": _json_value(val_psnr),
        })
        log.info("epoch %d/%d  train loss %.5f  val loss %.5f  "
                 "val ssim %.4f  val psnr %.2f dB", epoch,
                 train_cfg.epochs, train_loss, val_loss, val_ssim, val_psnr)

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    ckpt_path = out / CHECKPOINT_NAME
    torch.save({
        "state_dict": model.state_dict(),
        "unet_config": asdict(unet_cfg),
        "train_config": asdict(train_cfg),
        "regime": regime,
    }, ckpt_path)

    report = {
        "regime": regime,
        "unet_config": asdict(unet_cfg),
        "train_config": asdict(train_cfg),
        "train_pairs": y1_train.shape[0],
        "val_pairs": y1_val.shape[0],
        "epochs": rows,
        "checkpoint": CHECKPOINT_NAME,
        "checkpoint_hash": file_hash(ckpt_path),
    }
    (out / REPORT_NAME).write_text(
        json.dumps(report, indent=2, sort_keys=True) + "\n",
        encoding="utf-8")
    return report

"""UNet pseudo-measurement generator for two-shot phase-diverse datasets.

Trains on the (y1, y2) pairs described by a dataset manifest and emits
y2p tensors that the imaging engine accepts through its --y2-pseudo
intake. All exchange with the engine happens through the `.pdt` tensor
format and manifest JSON; nothing here imports the engine.
"""

__version__ = "0.1.0"

from .data import ManifestError, load_manifest, load_pairs, split_entries
from .inference import CheckpointError, infer, load_checkpoint
from .losses import gaussian_window, hybrid_loss, psnr, ssim
from .model import UNet, UNetConfig
from .tensorio import (
    TensorFormatError,
    read_header,
    read_tensor,
    write_tensor,
)
from .training import TrainConfig, file_hash, train

__all__ = [
    "CheckpointError",
    "ManifestError",
    "TensorFormatError",
    "TrainConfig",
    "UNet",
    "UNetConfig",
    "file_hash",
    "gaussian_window",
    "hybrid_loss",
    "infer",
    "load_checkpoint",
    "load_manifest",
    "load_pairs",
    "psnr",
    "read_header",
    "read_tensor",
    "split_entries",
    "ssim",
    "train",
    "write_tensor",
]

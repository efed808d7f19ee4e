"""Differentiable image metrics matching the imaging engine's definitions.

SSIM uses the identical 11x11 Gaussian window (sigma 1.5), k1 = 0.01,
k2 = 0.03, valid windows only, and the dynamic range taken from the
reference image (1.0 when the reference is constant), so numbers in
training reports are directly comparable with the engine's `evaluate`
output. The training objective is mse + alpha * (1 - ssim).
"""

from __future__ import annotations

import math

import torch
from torch.nn import functional as F


def gaussian_window(size: int = 11, sigma: float = 1.5,
                    dtype: torch.dtype = torch.float32,
                    device: torch.device | str = "cpu") -> torch.Tensor:
    """Unit-sum separable Gaussian window, shaped [1, 1, size, size]."""
    ax = torch.arange(size, dtype=dtype, device=device) - (size - 1) / 2.0
    g = torch.exp(-0.5 * (ax / sigma) ** 2)
    w = torch.outer(g, g)
    return (w / w.sum()).reshape(1, 1, size, size)


def _as_batch(x: torch.Tensor) -> torch.Tensor:
    if x.ndim == 2:
        return x.reshape(1, 1, *x.shape)
    if x.ndim == 4 and x.shape[1] == 1:
        return x
    raise ValueError(f"expected [h, w] or [batch, 1, h, w], "
                     f"got {tuple(x.shape)}")


def ssim(pred: torch.Tensor, target: torch.Tensor,
         window_size: int = 11, sigma: float = 1.5,
         k1: float = 0.01, k2: float = 0.03,
         dynamic_range: float | None = None) -> torch.Tensor:
    """Per-sample mean SSIM over valid windows, averaged over the batch.

    The target is the reference: with dynamic_range None each sample
    uses its own target max - min (1.0 for constant targets).
    """
    a = _as_batch(pred)
    b = _as_batch(target)
    if a.shape != b.shape:
        raise ValueError(f"image shapes differ: {tuple(a.shape)} vs "
                         f"{tuple(b.shape)}")
    if min(a.shape[2:]) < window_size:
        raise ValueError(f"images {tuple(a.shape[2:])} smaller than the "
                         f"{window_size}px window")
    if dynamic_range is None:
        flat = b.reshape(b.shape[0], -1)
        drange = flat.max(dim=1).values - flat.min(dim=1).values
        drange = torch.where(drange == 0, torch.ones_like(drange), drange)
    else:
        drange = torch.full((b.shape[0],), float(dynamic_range),
                            dtype=b.dtype, device=b.device)
    drange = drange.reshape(-1, 1, 1, 1)
    c1 = (k1 * drange) ** 2
    c2 = (k2 * drange) ** 2

    w = gaussian_window(window_size, sigma, a.dtype, a.device)
    mu_a = F.conv2d(a, w)
    mu_b = F.conv2d(b, w)
    var_a = F.conv2d(a * a, w) - mu_a * mu_a
    var_b = F.conv2d(b * b, w) - mu_b * mu_b
    cov = F.conv2d(a * b, w) - mu_a * mu_b
    num = (2 * mu_a * mu_b + c1) * (2 * cov + c2)
    den = (mu_a * mu_a + mu_b * mu_b + c1) * (var_a + var_b + c2)
    return (num / den).mean(dim=(1, 2, 3)).mean()


def hybrid_loss(pred: torch.Tensor, target: torch.Tensor,
                alpha: float = 1.0) -> torch.Tensor:
    """mse + alpha * (1 - ssim), the training objective."""
    err = F.mse_loss(pred, target)
    return err + alpha * (1.0 - ssim(pred, target))


def psnr(pred: torch.Tensor, target: torch.Tensor,
         peak: float = 1.0) -> float:
    """10*log10(peak^2 / mse); +inf for identical images."""
    err = float(F.mse_loss(pred, target))
    if err == 0:
        return math.inf
    return 10.0 * math.log10(peak * peak / err)

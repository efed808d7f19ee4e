"""Image quality metrics: MSE, PSNR, SSIM, the hybrid training loss, and
line-profile contrast.

SSIM uses the canonical constants (11x11 Gaussian window, sigma 1.5,
k1 = 0.01, k2 = 0.03) over valid windows only. The secondary network
component computes its differentiable loss with these exact constants so
reported numbers are comparable across components.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.signal import fftconvolve

from .retrieval import align_global_phase

__all__ = [
    "SsimParams",
    "mse",
    "psnr",
    "ssim",
    "hybrid_loss",
    "line_profile",
    "contrast",
    "aligned_phase_ssim",
]


def gaussian_window(size: int = 11, sigma: float = 1.5) -> np.ndarray:
    """Separable Gaussian window normalized to unit sum."""
    ax = np.arange(size, dtype=np.float64) - (size - 1) / 2.0
    g = np.exp(-0.5 * (ax / sigma) ** 2)
    w = np.outer(g, g)
    return w / w.sum()


@dataclass(frozen=True)
class SsimParams:
    window_size: int = 11
    sigma: float = 1.5
    k1: float = 0.01
    k2: float = 0.03
    dynamic_range: float | None = None  # None: max - min of the reference

    def __post_init__(self):
        if self.k1 <= 0 or self.k2 <= 0:
            raise ValueError("k1 and k2 must be > 0")


def _check_pair(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape:
        raise ValueError(f"image shapes differ: {a.shape} vs {b.shape}")


def mse(a: np.ndarray, b: np.ndarray) -> float:
    _check_pair(a, b)
    d = np.asarray(a, dtype=np.float64) - np.asarray(b, dtype=np.float64)
    return float(np.mean(d * d))


def psnr(a: np.ndarray, b: np.ndarray, peak: float = 1.0) -> float:
    """10*log10(peak^2 / mse); +inf when the images are identical."""
    err = mse(a, b)
    if err == 0:
        return math.inf
    return 10.0 * math.log10(peak * peak / err)


def ssim(a: np.ndarray, b: np.ndarray, params: SsimParams | None = None) -> float:
    """Mean local SSIM over valid windows; b is the reference image."""
    params = params or SsimParams()
    _check_pair(a, b)
    if min(a.shape) < params.window_size:
        raise ValueError(
            f"images {a.shape} smaller than the {params.window_size}px window")
    drange = params.dynamic_range
    if drange is None:
        drange = float(b.max() - b.min())
        if drange == 0:
            drange = 1.0
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    w = gaussian_window(params.window_size, params.sigma)
    c1 = (params.k1 * drange) ** 2
    c2 = (params.k2 * drange) ** 2
    mu_a = fftconvolve(a, w, mode="valid")
    mu_b = fftconvolve(b, w, mode="valid")
    var_a = fftconvolve(a * a, w, mode="valid") - mu_a * mu_a
    var_b = fftconvolve(b * b, w, mode="valid") - mu_b * mu_b
    cov = fftconvolve(a * b, w, mode="valid") - mu_a * mu_b
    num = (2 * mu_a * mu_b + c1) * (2 * cov + c2)
    den = (mu_a * mu_a + mu_b * mu_b + c1) * (var_a + var_b + c2)
    return float(np.mean(num / den))


def hybrid_loss(pred: np.ndarray, target: np.ndarray, alpha: float = 1.0,
                params: SsimParams | None = None) -> float:
    """MSE + alpha * (1 - SSIM) against the target as reference."""
    return mse(pred, target) + alpha * (1.0 - ssim(pred, target, params))


def line_profile(img: np.ndarray, row: int | None = None) -> np.ndarray:
    """One pixel row of the image; defaults to the central row."""
    if row is None:
        row = img.shape[0] // 2
    if not 0 <= row < img.shape[0]:
        raise ValueError(f"row {row} outside [0, {img.shape[0]})")
    return np.asarray(img[row, :], dtype=np.float64).copy()


def contrast(profile: np.ndarray) -> float:
    """(max - min) / (max + min) over the profile; 0 for an all-zero row."""
    hi, lo = float(np.max(profile)), float(np.min(profile))
    if hi + lo == 0:
        return 0.0
    return (hi - lo) / (hi + lo)


def aligned_phase_ssim(est_field: np.ndarray, truth_phase: np.ndarray,
                       support: np.ndarray, phi_max: float) -> float:
    """SSIM between recovered and true phase maps after global-phase
    alignment, over the support bounding box.

    Both maps are divided by phi_max so the comparison runs at dynamic
    range exactly 1.0. The estimate is aligned to the reference field
    e^{i*truth_phase} restricted to the support; no twin alignment is
    attempted.
    """
    if np.iscomplexobj(truth_phase):
        raise ValueError("truth_phase must be a real phase map in radians")
    support = np.asarray(support, dtype=bool)
    ref = np.where(support, np.exp(1j * truth_phase), 0.0)
    aligned = align_global_phase(est_field, ref)
    rows = np.any(support, axis=1)
    cols = np.any(support, axis=0)
    r0, r1 = np.argmax(rows), len(rows) - np.argmax(rows[::-1])
    c0, c1 = np.argmax(cols), len(cols) - np.argmax(cols[::-1])
    est_crop = np.angle(aligned[r0:r1, c0:c1]) / phi_max
    ref_crop = np.asarray(truth_phase, dtype=np.float64)[r0:r1, c0:c1] / phi_max
    return ssim(est_crop, ref_crop, SsimParams(dynamic_range=1.0))

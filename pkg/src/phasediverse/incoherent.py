"""PSF/OTF synthesis and the incoherent blur forward model.

The measurement model is y_k = I_obj (*) |h_k|^2 + n_k with (*) a
circular convolution. PSFs are normalized to unit sum, so blurring
preserves total energy and the OTF has unit DC gain. With the unitary
centered transforms used here the frequency-domain form is exactly
fft_centered(y) = fft_centered(x) * OTF.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grids import Grid, fft_centered, ifft_centered

__all__ = ["NoiseSpec", "psf_from_pupil", "otf_from_psf", "blur", "add_noise"]


@dataclass(frozen=True)
class NoiseSpec:
    """Additive Gaussian noise with sigma = fraction * image peak."""

    fraction: float
    seed: int = 0

    def __post_init__(self):
        if self.fraction < 0:
            raise ValueError(f"noise fraction must be >= 0, got {self.fraction}")


def psf_from_pupil(pupil: np.ndarray) -> np.ndarray:
    """Intensity point response |F{pupil}|^2, normalized to unit sum."""
    intensity = np.abs(fft_centered(pupil)) ** 2
    total = intensity.sum()
    if total == 0:
        raise ValueError("pupil is identically zero, PSF undefined")
    return intensity / total


def otf_from_psf(psf: np.ndarray) -> np.ndarray:
    """Transfer function: transform of the PSF scaled to OTF(0) = 1."""
    otf = fft_centered(psf)
    c = psf.shape[0] // 2
    return otf / otf[c, c]


def blur(obj: np.ndarray, psf: np.ndarray, grid: Grid | None = None) -> np.ndarray:
    """Circular convolution of an intensity image with a unit-sum PSF."""
    if obj.shape != psf.shape:
        raise ValueError(f"object shape {obj.shape} != psf shape {psf.shape}")
    if grid is not None:
        grid.check(obj, "object")
    n = obj.shape[0]
    # unitary transforms absorb 1/n each way, so the convolution theorem
    # carries an explicit factor n
    out = n * ifft_centered(fft_centered(obj) * fft_centered(psf)).real
    return np.where(out < 0, 0.0, out)


def add_noise(img: np.ndarray, spec: NoiseSpec) -> np.ndarray:
    """img + N(0, (fraction * max(img))^2), clipped at zero, seeded (PCG64)."""
    if spec.fraction == 0:
        return img.copy()
    rng = np.random.default_rng(spec.seed)
    sigma = spec.fraction * float(img.max())
    noisy = img + rng.normal(0.0, sigma, img.shape)
    return np.clip(noisy, 0.0, None)

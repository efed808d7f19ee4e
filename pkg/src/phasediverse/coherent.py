"""Coherent forward models: Fourier amplitudes under plane-wave and
vortex illumination of finite-support pure phase objects.

y1 = |F{obj}| (plane wave), y2 = |F{obj * e^{i*theta}}| (vortex). The
canonical stored quantity is the amplitude m = |F{.}|; datasets hold
m^gamma (gamma = 0.1 by default) to compress the dynamic range, and the
detector intensity is m^2 by definition.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from PIL import Image

from .grids import Grid, fft_centered, spiral_phase

__all__ = [
    "PhaseObject",
    "GammaScale",
    "embed_phase_object",
    "fourier_amplitude",
    "gamma_scale",
    "gamma_unscale",
    "resize_bilinear",
]


@dataclass(frozen=True)
class GammaScale:
    gamma: float = 0.1

    def __post_init__(self):
        if not 0 < self.gamma <= 1:
            raise ValueError(f"gamma must be in (0, 1], got {self.gamma}")


@dataclass(frozen=True)
class PhaseObject:
    """Unit-modulus field inside a centered support window, zero outside."""

    grid: Grid
    field: np.ndarray
    support: np.ndarray
    phi_max: float

    def phase_map(self) -> np.ndarray:
        """Phase in radians inside the support, 0 outside."""
        return np.where(self.support, np.angle(self.field), 0.0)


def resize_bilinear(img: np.ndarray, size: int) -> np.ndarray:
    """Bilinear resize of a float image to size x size (fixed method)."""
    pil = Image.fromarray(np.ascontiguousarray(img, dtype=np.float32), mode="F")
    out = pil.resize((size, size), resample=Image.BILINEAR)
    return np.asarray(out, dtype=np.float64)


def _rescale01(img: np.ndarray) -> np.ndarray:
    lo, hi = float(img.min()), float(img.max())
    if hi == lo:
        return np.zeros_like(img, dtype=np.float64)
    return (img.astype(np.float64) - lo) / (hi - lo)


def embed_phase_object(img: np.ndarray, window: Grid, support_size: int,
                       phi_max: float) -> PhaseObject:
    """e^{i*phi_max*img} on a centered support_size^2 box, zero outside.

    The source image is rescaled to [0, 1] and bilinearly resized to the
    support before phase embedding, so phases cover [0, phi_max].
    """
    if not 0 < support_size < window.n:
        raise ValueError(
            f"support {support_size} must lie in (0, {window.n})")
    scaled = _rescale01(np.asarray(img, dtype=np.float64))
    if scaled.shape != (support_size, support_size):
        scaled = _rescale01(resize_bilinear(scaled, support_size))
    i0 = window.n // 2 - support_size // 2
    sl = slice(i0, i0 + support_size)
    support = np.zeros((window.n, window.n), dtype=bool)
    support[sl, sl] = True
    field = np.zeros((window.n, window.n), dtype=np.complex128)
    field[sl, sl] = np.exp(1j * phi_max * scaled)
    return PhaseObject(grid=window, field=field, support=support,
                       phi_max=float(phi_max))


def fourier_amplitude(obj: PhaseObject, illum: str = "plane") -> np.ndarray:
    """Measured Fourier amplitude |F{obj * modulation}|.

    illum "plane" uses no modulation; "vortex" multiplies the object by
    the charge-1 spiral phase before propagation.
    """
    if illum == "plane":
        field = obj.field
    elif illum == "vortex":
        field = obj.field * spiral_phase(obj.grid)
    else:
        raise ValueError(f"illumination must be 'plane' or 'vortex', got {illum!r}")
    return np.abs(fft_centered(field))


def gamma_scale(m: np.ndarray, g: GammaScale) -> np.ndarray:
    """Elementwise m^gamma for non-negative amplitudes."""
    if np.any(m < 0):
        raise ValueError("gamma_scale requires non-negative input")
    return np.power(m, g.gamma)


def gamma_unscale(d: np.ndarray, g: GammaScale) -> np.ndarray:
    """Inverse of gamma_scale: d^(1/gamma)."""
    if np.any(d < 0):
        raise ValueError("gamma_unscale requires non-negative input")
    return np.power(d, 1.0 / g.gamma)

"""Iterative Fourier phase retrieval.

hio() is the single-shot hybrid input-output baseline; it recovers the
object or, just as happily, its twin x*(-u,-v), which is the stagnation
mode this package exists to remove. diversity_retrieve() alternates
amplitude projections between the plane-wave measurement y1 and the
vortex-modulated measurement y2; the spiral modulation breaks the twin
symmetry, so the loop settles on the true object. During the last
final_plain_iters iterations the vortex half of the loop is disabled and
only y1 consistency plus the support constraint are enforced.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .grids import fft_centered, ifft_centered, make_grid, spiral_phase

__all__ = [
    "RetrievalConfig",
    "RetrievalResult",
    "hio",
    "diversity_retrieve",
    "align_global_phase",
    "twin",
]

SUPPORT_ONLY = "support-only"
SUPPORT_UNIT_MODULUS = "support+unit-modulus"


@dataclass(frozen=True)
class RetrievalConfig:
    total_iters: int = 500
    final_plain_iters: int = 25
    beta: float = 0.9
    seed: int = 0
    constraint: str = SUPPORT_ONLY

    def __post_init__(self):
        if not 0 <= self.final_plain_iters <= self.total_iters:
            raise ValueError("need 0 <= final_plain_iters <= total_iters")
        if not 0 < self.beta < 1:
            raise ValueError(f"beta must be in (0, 1), got {self.beta}")
        if self.constraint not in (SUPPORT_ONLY, SUPPORT_UNIT_MODULUS):
            raise ValueError(f"unknown constraint {self.constraint!r}")


@dataclass
class RetrievalResult:
    field: np.ndarray
    residual_history: list[float] = field(default_factory=list)
    iterations_run: int = 0


def _check_support(support: np.ndarray, shape) -> np.ndarray:
    support = np.asarray(support, dtype=bool)
    if support.shape != tuple(shape):
        raise ValueError(f"support shape {support.shape} != data shape {shape}")
    if not support.any():
        raise ValueError("support mask is empty")
    return support


def _project(x: np.ndarray, support: np.ndarray, constraint: str) -> np.ndarray:
    if constraint == SUPPORT_UNIT_MODULUS:
        mag = np.abs(x)
        unit = np.where(mag > 0, x / np.where(mag > 0, mag, 1.0), 1.0)
        return np.where(support, unit, 0.0)
    return np.where(support, x, 0.0)


def _random_start(y_amp: np.ndarray, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    phase = rng.uniform(0.0, 2.0 * np.pi, y_amp.shape)
    return y_amp * np.exp(1j * phase)


def _residual(G: np.ndarray, y_amp: np.ndarray, y_norm: float) -> float:
    return float(np.linalg.norm(np.abs(G) - y_amp) / y_norm)


def _warn_if_scaled(y_amp: np.ndarray, name: str) -> None:
    # Diffraction amplitudes are DC-dominated (max/median >> 10); a flat
    # histogram suggests the caller forgot gamma_unscale on stored data.
    med = float(np.median(y_amp))
    if med > 0 and float(y_amp.max()) / med < 3.0:
        warnings.warn(
            f"{name} has a compressed dynamic range (max/median < 3); "
            "stored datasets are gamma-scaled and need gamma_unscale first",
            stacklevel=3)


def hio(y1_amp: np.ndarray, support: np.ndarray,
        cfg: RetrievalConfig | None = None) -> RetrievalResult:
    """Hybrid input-output on a single Fourier amplitude."""
    cfg = cfg or RetrievalConfig()
    support = _check_support(support, y1_amp.shape)
    y_norm = float(np.linalg.norm(y1_amp))
    if y_norm == 0:
        raise ValueError("y1 amplitude is identically zero")
    _warn_if_scaled(y1_amp, "y1_amp")
    x = _project(ifft_centered(_random_start(y1_amp, cfg.seed)),
                 support, cfg.constraint)
    estimate = x
    history = []
    for _ in range(cfg.total_iters):
        Gp = y1_amp * np.exp(1j * np.angle(fft_centered(x)))
        xp = ifft_centered(Gp)
        if cfg.constraint == SUPPORT_UNIT_MODULUS:
            inside = _project(xp, support, cfg.constraint)
        else:
            inside = xp
        x = np.where(support, inside, x - cfg.beta * xp)
        estimate = np.where(support, inside, 0.0)
        history.append(_residual(fft_centered(estimate), y1_amp, y_norm))
    return RetrievalResult(field=estimate, residual_history=history,
                           iterations_run=cfg.total_iters)


def diversity_retrieve(y1_amp: np.ndarray, y2_amp: np.ndarray,
                       support: np.ndarray,
                       cfg: RetrievalConfig | None = None) -> RetrievalResult:
    """Alternating amplitude projections between the two measurement planes.

    One iteration: replace the Fourier amplitude with y1, inverse
    transform, apply the support constraint, modulate by the spiral
    phase, transform, replace with y2, inverse transform, demodulate by
    the conjugate spiral phase, apply the support constraint again, and
    transform to close the loop. The last final_plain_iters iterations
    skip the y2 half entirely.
    """
    if y1_amp.shape != y2_amp.shape:
        raise ValueError(f"y1 shape {y1_amp.shape} != y2 shape {y2_amp.shape}")
    cfg = cfg or RetrievalConfig()
    support = _check_support(support, y1_amp.shape)
    y_norm = float(np.linalg.norm(y1_amp))
    if y_norm == 0:
        raise ValueError("y1 amplitude is identically zero")
    _warn_if_scaled(y1_amp, "y1_amp")
    _warn_if_scaled(y2_amp, "y2_amp")
    grid = make_grid(y1_amp.shape[0])
    sp = spiral_phase(grid)
    spc = np.conj(sp)
    G = _random_start(y1_amp, cfg.seed)
    x = _project(ifft_centered(G), support, cfg.constraint)
    plain_from = cfg.total_iters - cfg.final_plain_iters
    history = []
    for t in range(cfg.total_iters):
        G = y1_amp * np.exp(1j * np.angle(G))
        x = _project(ifft_centered(G), support, cfg.constraint)
        if t < plain_from:
            G2 = fft_centered(x * sp)
            G2 = y2_amp * np.exp(1j * np.angle(G2))
            x = _project(ifft_centered(G2) * spc, support, cfg.constraint)
        G = fft_centered(x)
        history.append(_residual(G, y1_amp, y_norm))
    return RetrievalResult(field=x, residual_history=history,
                           iterations_run=cfg.total_iters)


def align_global_phase(est: np.ndarray, ref: np.ndarray) -> np.ndarray:
    """Rotate est by the unit scalar maximizing real correlation with ref."""
    if est.shape != ref.shape:
        raise ValueError(f"shape mismatch {est.shape} vs {ref.shape}")
    z = complex(np.sum(est * np.conj(ref)))
    if z == 0:
        raise ValueError("global phase alignment undefined: zero overlap")
    return est * np.exp(-1j * np.angle(z))


def twin(obj: np.ndarray) -> np.ndarray:
    """Conjugate inversion x*(-u,-v) in centered-origin indexing.

    Shares the Fourier amplitude of x; for even n the coordinate
    negation is index reversal followed by a one-pixel roll.
    """
    return np.conj(np.roll(obj[::-1, ::-1], 1, axis=(0, 1)))

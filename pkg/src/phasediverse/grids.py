"""Centered grids, unitary FFT conventions, and aperture construction.

Every array in this package lives on a square, even-sized grid whose
origin pixel sits at index (n//2, n//2). Pixel (i, j) has centered
coordinates (u, v) = (j - n//2, i - n//2) in pixel units. Transforms are
unitary (norm="ortho") and keep the origin centered via the usual
ifftshift -> fft -> fftshift sandwich, so Parseval holds exactly and no
module needs to track shift state.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Grid",
    "make_grid",
    "fft_centered",
    "ifft_centered",
    "open_aperture",
    "spiral_phase",
    "spiral_aperture",
]

_MIN_N = 8
_MAX_N = 8192


@dataclass(frozen=True)
class Grid:
    """Square pixel grid with the zero coordinate at (n//2, n//2)."""

    n: int
    _coords: tuple[np.ndarray, np.ndarray] = field(
        init=False, repr=False, compare=False, default=None)

    def __post_init__(self):
        if self.n % 2 != 0 or not _MIN_N <= self.n <= _MAX_N:
            raise ValueError(
                f"grid size must be even and in [{_MIN_N}, {_MAX_N}], got {self.n}")
        axis = np.arange(self.n) - self.n // 2
        uu, vv = np.meshgrid(axis, axis)
        uu.setflags(write=False)
        vv.setflags(write=False)
        object.__setattr__(self, "_coords", (uu, vv))

    @property
    def origin(self) -> tuple[int, int]:
        return (self.n // 2, self.n // 2)

    @property
    def uu(self) -> np.ndarray:
        """Horizontal centered coordinate of every pixel."""
        return self._coords[0]

    @property
    def vv(self) -> np.ndarray:
        """Vertical centered coordinate of every pixel."""
        return self._coords[1]

    def radius(self) -> np.ndarray:
        return np.hypot(self.uu, self.vv)

    def check(self, a: np.ndarray, name: str = "array") -> np.ndarray:
        if a.shape != (self.n, self.n):
            raise ValueError(
                f"{name} shape {a.shape} does not match grid ({self.n}, {self.n})")
        return a


def make_grid(n: int) -> Grid:
    """Build a Grid; n must be even and within [8, 8192]."""
    return Grid(int(n))


def fft_centered(f: np.ndarray) -> np.ndarray:
    """Unitary 2D DFT that maps centered arrays to centered spectra."""
    return np.fft.fftshift(np.fft.fft2(np.fft.ifftshift(f), norm="ortho"))


def ifft_centered(f: np.ndarray) -> np.ndarray:
    """Inverse of fft_centered."""
    return np.fft.fftshift(np.fft.ifft2(np.fft.ifftshift(f), norm="ortho"))


def _check_radius(grid: Grid, radius: float) -> float:
    if not 0 < radius < grid.n / 2:
        raise ValueError(
            f"aperture radius must lie in (0, {grid.n / 2}), got {radius}")
    return float(radius)


def open_aperture(grid: Grid, radius: float) -> np.ndarray:
    """Unit disk pupil: 1 where u^2 + v^2 <= radius^2, else 0."""
    radius = _check_radius(grid, radius)
    disk = grid.uu ** 2 + grid.vv ** 2 <= radius ** 2
    return disk.astype(np.complex128)


def spiral_phase(grid: Grid) -> np.ndarray:
    """Charge-1 vortex factor e^{i*theta}, theta = atan2(v, u).

    Computed as (u + iv)/|r| so that the odd symmetry
    spiral_phase(-u, -v) = -spiral_phase(u, v) is exact in floating
    point. The origin pixel, where the phase is singular, is set to 0;
    this keeps the vortex DC null and the disk-sum cancellation exact
    (any unit value there would leave a spurious 1/n DC residue).
    """
    r = grid.radius()
    out = np.empty((grid.n, grid.n), dtype=np.complex128)
    with np.errstate(invalid="ignore", divide="ignore"):
        np.divide(grid.uu + 1j * grid.vv, r, out=out)
    out[grid.origin] = 0.0
    return out


def spiral_aperture(grid: Grid, radius: float) -> np.ndarray:
    """Vortex pupil: e^{i*theta} inside the disk, 0 outside."""
    return open_aperture(grid, radius) * spiral_phase(grid)

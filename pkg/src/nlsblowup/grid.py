"""Uniform periodic grids and their discrete Fourier machinery.

A field on a grid is a plain complex ``numpy`` array whose shape is
``grid.shape`` (``(Np,)`` in 1D, ``(Np, Np)`` in 2D, row-major).  The
transforms use the unnormalised forward FFT, so the quadrature L2 norm and
the coefficient l2 norm are related by ``grid.parseval``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import scipy.fft as sfft


def _is_power_of_two(n: int) -> bool:
    return n > 0 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class Grid:
    """Square periodic grid on ``[-L, L)^dim`` with ``Np`` points per axis."""

    dim: int
    L: float
    Np: int
    dx: float = field(init=False)

    def __post_init__(self):
        if self.dim not in (1, 2):
            raise ValueError(f"dim must be 1 or 2, got {self.dim}")
        if not _is_power_of_two(int(self.Np)) or self.Np < 8:
            raise ValueError(f"points per axis must be a power of two >= 8, got {self.Np}")
        if not self.L > 0:
            raise ValueError(f"half width must be positive, got {self.L}")
        object.__setattr__(self, "dx", 2.0 * self.L / self.Np)

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.Np,) * self.dim

    @property
    def size(self) -> int:
        return self.Np**self.dim

    @property
    def cell(self) -> float:
        """Quadrature weight of one sample (dx**dim)."""
        return self.dx**self.dim

    @property
    def parseval(self) -> float:
        """Factor turning sum |c|^2 of FFT coefficients into the L2 norm squared."""
        return self.cell / self.size

    @cached_property
    def x1d(self) -> np.ndarray:
        return -self.L + self.dx * np.arange(self.Np)

    @cached_property
    def k1d(self) -> np.ndarray:
        # fftfreq ordering: 0, 1, ..., n/2-1, -n/2, ..., -1 (times pi/L)
        return 2.0 * np.pi * np.fft.fftfreq(self.Np, d=self.dx)

    @cached_property
    def coords(self) -> tuple[np.ndarray, ...]:
        """Broadcastable coordinate arrays, one per axis."""
        if self.dim == 1:
            return (self.x1d,)
        return (self.x1d[:, None], self.x1d[None, :])

    @cached_property
    def wavenumbers(self) -> tuple[np.ndarray, ...]:
        if self.dim == 1:
            return (self.k1d,)
        return (self.k1d[:, None], self.k1d[None, :])

    @cached_property
    def r2(self) -> np.ndarray:
        """|x|^2 sampled on the full grid."""
        return sum(np.broadcast_to(c**2, self.shape) for c in self.coords)

    @cached_property
    def k2(self) -> np.ndarray:
        """|k|^2 on the full spectral grid (transform-native ordering)."""
        return sum(np.broadcast_to(k**2, self.shape) for k in self.wavenumbers)

    def check(self, f: np.ndarray) -> None:
        if np.shape(f) != self.shape:
            raise ValueError(f"field shape {np.shape(f)} does not match grid {self.shape}")


def make_grid(dim: int, L: float, Np: int) -> Grid:
    return Grid(int(dim), float(L), int(Np))


def to_spectral(grid: Grid, f: np.ndarray) -> np.ndarray:
    grid.check(f)
    return sfft.fftn(f)


def from_spectral(grid: Grid, c: np.ndarray) -> np.ndarray:
    grid.check(c)
    return sfft.ifftn(c)


def laplacian_symbol(grid: Grid) -> np.ndarray:
    """Fourier multiplier of the Laplacian, ``-|k|^2``."""
    return -grid.k2


def l2_norm_sq(grid: Grid, f: np.ndarray) -> float:
    """Rectangle-rule quadrature of |f|^2 (spectrally accurate on periodic grids)."""
    return float(np.sum(f.real**2 + f.imag**2) * grid.cell)


def spectral_norm_sq(grid: Grid, c: np.ndarray) -> float:
    return float(np.sum(c.real**2 + c.imag**2) * grid.parseval)


def gradient(grid: Grid, f: np.ndarray) -> tuple[np.ndarray, ...]:
    """Spectral gradient, one component per axis."""
    c = to_spectral(grid, f)
    return tuple(from_spectral(grid, 1j * k * c) for k in grid.wavenumbers)

"""Initial profiles used in the blow-up experiments."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import Grid

KINDS = (
    "single_gauss",
    "two_hump",
    "three_hump",
    "two_up_one_down",
    "odd_tanh",
    "asym_phase",
    "asym_heights",
    "asym_two_hump_narrow",
    "two_hump_no_phase",
    "td_two_hump",
)
PHASES = ("none", "log_cosh", "log_cosh_shifted", "radial_log_cosh")

# Which phase factors each kind accepts.  asym_phase carries its own shifted
# phase, the no-phase kinds are phase-free by definition.
_ALLOWED = {
    "single_gauss": {"none", "log_cosh"},
    "two_hump": {"none", "log_cosh"},
    "three_hump": {"none", "log_cosh"},
    "two_up_one_down": {"none", "log_cosh"},
    "odd_tanh": {"none", "log_cosh"},
    "asym_phase": {"log_cosh_shifted"},
    "asym_heights": {"none", "log_cosh"},
    "asym_two_hump_narrow": {"none"},
    "two_hump_no_phase": {"none"},
    "td_two_hump": {"none", "radial_log_cosh"},
}


def log_cosh(x):
    """log(2 cosh x) = log(e^x + e^-x), without overflow for large |x|."""
    ax = np.abs(x)
    return ax + np.log1p(np.exp(-2.0 * ax))


@dataclass(frozen=True)
class ProfileSpec:
    kind: str
    C: float = 1.0
    phase: str = "none"
    shift: float = 0.25
    chirp: float | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown profile kind {self.kind!r}")
        if self.phase not in PHASES:
            raise ValueError(f"unknown phase {self.phase!r}")
        if self.phase not in _ALLOWED[self.kind]:
            raise ValueError(f"phase {self.phase!r} is not used with kind {self.kind!r}")
        if self.C < 0:
            raise ValueError("amplitude C must be non-negative")
        if self.chirp is not None and self.chirp == 0:
            raise ValueError("chirp a must be nonzero")

    @property
    def dim(self) -> int:
        return 2 if self.kind == "td_two_hump" else 1


def _g(s):
    return np.exp(-s * s)


def _modulus_1d(kind: str, x: np.ndarray) -> np.ndarray:
    if kind == "single_gauss":
        return _g(x)
    if kind in ("two_hump", "asym_phase", "two_hump_no_phase"):
        return _g(x) - 0.9 * np.exp(-3.0 * x * x)
    if kind == "three_hump":
        return _g(3 * x) + _g(3 * (x - 1)) + _g(3 * (x + 1))
    if kind == "two_up_one_down":
        return _g(3 * (x - 1)) - _g(3 * x) + _g(3 * (x + 1))
    if kind == "odd_tanh":
        return _g(x) * np.tanh(x)
    if kind == "asym_heights":
        return _g(x - 1.5) + 0.99 * _g(x + 1.5)
    if kind == "asym_two_hump_narrow":
        return _g(3 * x) + _g(3 * (x - 1.5))
    raise AssertionError(kind)


def chirp_factor(grid: Grid, a: float) -> np.ndarray:
    if a == 0:
        raise ValueError("chirp a must be nonzero")
    return np.exp(-1j * grid.r2 / (4.0 * a))


def apply_chirp(grid: Grid, f: np.ndarray, a: float) -> np.ndarray:
    """Multiply by the quadratic phase exp(-i|x|^2 / (4a))."""
    grid.check(f)
    return f * chirp_factor(grid, a)


def build_initial(spec: ProfileSpec, grid: Grid) -> np.ndarray:
    if spec.dim != grid.dim:
        raise ValueError(f"profile {spec.kind!r} needs a {spec.dim}D grid, got {grid.dim}D")

    if spec.kind == "td_two_hump":
        x, y = grid.coords
        u = (_g(x) - 0.9 * np.exp(-3.0 * x * x)) * _g(y)
        u = np.broadcast_to(u, grid.shape).astype(complex)
    else:
        (x,) = grid.coords
        u = _modulus_1d(spec.kind, x).astype(complex)
    u *= spec.C

    if spec.phase == "log_cosh":
        u *= np.exp(-1j * log_cosh(grid.x1d))
    elif spec.phase == "log_cosh_shifted":
        u *= np.exp(-1j * log_cosh(grid.x1d - spec.shift))
    elif spec.phase == "radial_log_cosh":
        u *= np.exp(-1j * log_cosh(np.sqrt(grid.r2)))

    if spec.chirp is not None:
        u = apply_chirp(grid, u, spec.chirp)
    return u

"""Measured quantities along a trajectory and the blow-up criterion."""

from __future__ import annotations

import csv
import math
from dataclasses import astuple, dataclass, fields

import numpy as np
import scipy.fft as sfft

from .grid import Grid
from .model import ModelParams
from .tssp import density_power

DEFAULT_THRESHOLD = 1e4


@dataclass(frozen=True)
class DiagRecord:
    t: float
    mass_sq: float
    kinetic: float
    potential: float
    total: float
    variance: float
    humps: int

    @classmethod
    def columns(cls) -> list[str]:
        return [f.name for f in fields(cls)]

    def row(self) -> tuple:
        return astuple(self)

    @property
    def finite(self) -> bool:
        return all(math.isfinite(v) for v in (self.mass_sq, self.kinetic, self.potential,
                                              self.variance))


@dataclass(frozen=True)
class BlowupVerdict:
    blew_up: bool
    t_star: float | None = None
    humps_at_blowup: int | None = None
    resolution_converged: bool = False
    # how t_star was obtained: "threshold", "overflow", "unresolved",
    # "solver_failure" or "" (no blow-up)
    detection: str = ""

    def __post_init__(self):
        if self.blew_up and self.t_star is None:
            raise ValueError("a blow-up verdict needs t_star")


def count_humps(f: np.ndarray, rel_floor: float = 0.1) -> int:
    """Strict local maxima of |f| above ``rel_floor * max|f|``.

    Neighbours wrap around (periodic grid).  2D fields are read along the
    mid-line row of the second axis (y = 0).
    """
    return _count_peaks(f.real**2 + f.imag**2, rel_floor**2)


def _count_peaks(rho: np.ndarray, floor: float) -> int:
    # maxima of |f|^2 are those of |f|; the floor is squared accordingly
    if rho.ndim == 2:
        rho = rho[:, rho.shape[1] // 2]
    top = rho.max() if rho.size else 0.0
    if not top > 0:
        return 0
    peak = (rho[1:-1] > rho[:-2]) & (rho[1:-1] > rho[2:]) & (rho[1:-1] > floor * top)
    n = int(np.count_nonzero(peak))
    # wrap-around neighbours for the two end samples
    for i in (0, rho.size - 1):
        r = rho[i]
        if r > rho[i - 1] and r > rho[(i + 1) % rho.size] and r > floor * top:
            n += 1
    return n


def measure(grid: Grid, u: np.ndarray, t: float, params: ModelParams,
            spectrum: np.ndarray | None = None) -> DiagRecord:
    """Mass, kinetic/potential/total energy, variance and hump count.

    The kinetic term is evaluated spectrally; pass ``spectrum`` (the FFT of
    ``u``) to avoid recomputing it.
    """
    rho = (u.real**2 + u.imag**2).ravel()
    cell = grid.cell
    mass = float(rho.sum()) * cell
    if spectrum is None:
        spectrum = sfft.fftn(u)
    c = spectrum.ravel()
    kin = float(np.dot(grid.k2.ravel(), c.real**2 + c.imag**2)) * grid.parseval
    s = params.sigma
    pot = params.g(t) / (s + 1) * float(np.dot(rho, density_power(u, s, rho))) * cell
    var = float(np.dot(grid.r2.ravel(), rho)) * cell
    with np.errstate(invalid="ignore"):
        humps = _count_peaks(rho.reshape(u.shape), 0.01) if np.isfinite(mass) else 0
    return DiagRecord(t, mass, kin, pot, kin - pot, var, humps)


class BlowupDetector:
    """Incremental form of :func:`detect_blowup` for use inside a time loop."""

    def __init__(self, first: DiagRecord, threshold: float = DEFAULT_THRESHOLD):
        self.threshold = threshold
        self.kin0 = first.kinetic
        self.pot0 = first.potential
        self.last = first

    def update(self, rec: DiagRecord) -> bool:
        """Return True when ``rec`` is the first sample past the threshold."""
        if self.pot0 <= 0 or self.kin0 <= 0:
            return False
        hit = (rec.kinetic >= self.threshold * self.kin0
               and rec.potential >= self.threshold * self.pot0)
        if not hit:
            self.last = rec
        return hit


def detect_blowup(series: list[DiagRecord], threshold: float = DEFAULT_THRESHOLD) -> BlowupVerdict:
    """First sample where kinetic and potential energy both exceed
    ``threshold`` times their initial values."""
    if not series:
        raise ValueError("empty diagnostic series")
    det = BlowupDetector(series[0], threshold)
    for rec in series[1:]:
        if det.update(rec):
            return BlowupVerdict(True, rec.t, det.last.humps, detection="threshold")
    return BlowupVerdict(False)


def j_quantity(grid: Grid, f: np.ndarray, t: float, alpha: float, sigma: float,
               coeff: float = 1.0) -> float:
    """Pseudo-conformal functional
    ``|J_alpha(t) f|^2 - 4 (t - alpha)^2 coeff/(sigma + 1) |f|_{2 sigma + 2}^{2 sigma + 2}``
    with ``J_alpha(t) = x + 2i(t - alpha) grad``."""
    c = sfft.fftn(f)
    tau = t - alpha
    jn = 0.0
    for x, k in zip(grid.coords, grid.wavenumbers):
        # x f + 2i tau d f/dx ; the derivative of f is ifft(i k c)
        comp = x * f - 2.0 * tau * sfft.ifftn(k * c)
        jn += float(np.sum(comp.real**2 + comp.imag**2))
    jn *= grid.cell
    rho = f.real**2 + f.imag**2
    pot = float(np.sum(rho * density_power(f, sigma, rho))) * grid.cell
    return jn - 4.0 * tau**2 * coeff / (sigma + 1) * pot


def virial_bound(n: int, sigma: float, energy: float) -> float:
    """Upper bound on d^2/dt^2 of the variance, ``4 n sigma E`` (for n sigma >= 2)."""
    return 4.0 * n * sigma * energy


def write_diag_csv(path, records: list[DiagRecord]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(DiagRecord.columns())
        for r in records:
            w.writerow([repr(float(v)) if isinstance(v, float) else v for v in r.row()])

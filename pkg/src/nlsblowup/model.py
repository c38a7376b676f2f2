"""Equation parameters: dimension, nonlinearity power and the coupling g(t).

The evolution is ``i u_t + Lap u = -g(t) |u|^{2 sigma} u`` with

* ``constant``:  g(t) = lam
* ``damped``:    g(t) = lam * exp(-2 sigma delta t)
* ``conformal``: g(t) = lam * (1 - t/a)^(n sigma - 2)

``lam`` defaults to 1 for the damped and conformal modes, which is the
normalisation those equations are written in.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace

COUPLING_KINDS = ("constant", "damped", "conformal")


class ConformalHorizonError(ValueError):
    """A conformal-coupling step reaches or crosses t = a (a > 0)."""


@dataclass(frozen=True)
class CouplingMode:
    kind: str = "constant"
    lam: float = 1.0
    delta: float = 0.0
    a: float | None = None

    def __post_init__(self):
        if self.kind not in COUPLING_KINDS:
            raise ValueError(f"unknown coupling kind {self.kind!r}")
        if self.lam < 0:
            raise ValueError("coupling strength must be non-negative")
        if self.kind == "damped" and self.delta < 0:
            raise ValueError("damping delta must be >= 0")
        if self.kind == "conformal" and not self.a:
            raise ValueError("conformal coupling needs a nonzero a")


def constant(lam: float) -> CouplingMode:
    return CouplingMode("constant", lam=lam)


def damped(delta: float, lam: float = 1.0) -> CouplingMode:
    return CouplingMode("damped", lam=lam, delta=delta)


def conformal(a: float, lam: float = 1.0) -> CouplingMode:
    return CouplingMode("conformal", lam=lam, a=a)


@dataclass(frozen=True)
class ModelParams:
    n: int
    sigma: float
    coupling: CouplingMode = CouplingMode()

    def __post_init__(self):
        if self.n not in (1, 2):
            raise ValueError(f"dimension must be 1 or 2, got {self.n}")
        if not self.sigma > 0:
            raise ValueError("sigma must be positive")
        if self.sigma < 2.0 / self.n:
            warnings.warn(
                f"sigma={self.sigma} is L2-subcritical in {self.n}D; no blow-up is expected",
                stacklevel=3,
            )

    @property
    def critical(self) -> bool:
        return math.isclose(self.n * self.sigma, 2.0)

    @property
    def conformal_power(self) -> float:
        return self.n * self.sigma - 2.0

    def with_coupling(self, **changes) -> ModelParams:
        return replace(self, coupling=replace(self.coupling, **changes))

    def g(self, t: float) -> float:
        c = self.coupling
        if c.kind == "constant":
            return c.lam
        if c.kind == "damped":
            return c.lam * math.exp(-2.0 * self.sigma * c.delta * t)
        h = 1.0 - t / c.a
        if h <= 0:
            raise ConformalHorizonError(f"t={t} is beyond the conformal horizon a={c.a}")
        return c.lam * h**self.conformal_power

    def g_integral(self, t: float, dt: float) -> float:
        """Closed form of the integral of g over [t, t + dt]."""
        c = self.coupling
        if c.kind == "constant":
            return c.lam * dt
        if c.kind == "damped":
            rate = 2.0 * self.sigma * c.delta
            x = rate * dt
            # -expm1(-x)/x -> 1 as x -> 0
            frac = 1.0 if x == 0 else -math.expm1(-x) / x
            return c.lam * math.exp(-rate * t) * dt * frac
        a = c.a
        h0 = 1.0 - t / a
        h1 = 1.0 - (t + dt) / a
        if h0 <= 0 or h1 <= 0:
            raise ConformalHorizonError(
                f"step [{t}, {t + dt}] reaches the conformal horizon a={a}"
            )
        q = self.conformal_power + 1.0
        # r = dt / (a h0); integral = a h0^q (1 - (1 - r)^q) / q, log form when q = 0
        r = dt / (a * h0)
        if q == 0:
            return -c.lam * a * math.log1p(-r)
        return -c.lam * a * h0**q * math.expm1(q * math.log1p(-r)) / q

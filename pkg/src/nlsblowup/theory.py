"""Closed-form predictions and bound functionals for blow-up times."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .grid import Grid, gradient, l2_norm_sq


@dataclass(frozen=True)
class ConformalOutcome:
    blows_up: bool
    t: float | None
    source_T: float
    a: float


def predict_conformal(T: float, a: float) -> ConformalOutcome:
    """Blow-up time after multiplying the data by exp(-i|x|^2/(4a)).

    Exact at critical power, and for the equation with the matching
    time-dependent coupling at supercritical power: ``aT/(a+T)`` when
    ``a > 0`` or ``a + T < 0``, global forward existence otherwise.
    """
    if not T > 0:
        raise ValueError("source blow-up time must be positive")
    if a == 0:
        raise ValueError("a must be nonzero")
    if a > 0 or a + T < 0:
        return ConformalOutcome(True, a * T / (a + T), T, a)
    return ConformalOutcome(False, None, T, a)


def _dual(p: float) -> float:
    return p / (p - 1.0)


def admissible_exponents(n: int, sigma: float) -> tuple[float, float, float, float]:
    """Strichartz exponents (q, r, s, k) used for local existence.

    Checks ``1/r' = 1/r + 2 sigma/s`` and ``1/q' = 1/q + 2 sigma/k``.
    """
    if sigma < 2.0 / n or (n >= 3 and sigma >= 2.0 / (n - 2)):
        raise ValueError(f"sigma={sigma} outside the admissible range for n={n}")
    r = s = 2.0 * sigma + 2.0
    q = (4.0 * sigma + 4.0) / (n * sigma)
    k = 2.0 * sigma * (2.0 * sigma + 2.0) / (2.0 - (n - 2) * sigma)
    if not (math.isclose(1 / _dual(r), 1 / r + 2 * sigma / s, rel_tol=0, abs_tol=1e-14)
            and math.isclose(1 / _dual(q), 1 / q + 2 * sigma / k, rel_tol=0, abs_tol=1e-14)):
        raise ArithmeticError("Hoelder identities failed")  # pragma: no cover
    return q, r, s, k


def lower_bound_exponent(n: int, sigma: float) -> float:
    """Exponent p in T* >= C <lambda>^p."""
    return -2.0 * sigma / (2.0 - (n - 2) * sigma)


UPPER_BOUND_EXPONENT = -0.5


def bracket(lam):
    return np.sqrt(1.0 + np.asarray(lam, dtype=float) ** 2)


@dataclass
class EnvelopeReport:
    lower_exponent: float
    upper_exponent: float
    C_lower: float
    C_upper: float
    slope: float
    tail_slope: float
    residual_range_lower: tuple[float, float]
    residual_range_upper: tuple[float, float]
    consistent: bool
    notes: list[str] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "lower_exponent": self.lower_exponent,
            "upper_exponent": self.upper_exponent,
            "C_lower": self.C_lower,
            "C_upper": self.C_upper,
            "fitted_slope": self.slope,
            "tail_slope": self.tail_slope,
            "consistent": self.consistent,
        }


def lambda_bound_envelope(sweep, n: int, sigma: float, slack: float = 0.05) -> EnvelopeReport:
    """Fit the two coupling-constant envelopes to (lambda, T*) pairs.

    Both constants are least-squares intercepts in log-log with the slope
    fixed to the bound exponent.  The bounds are statements about large
    lambda, so the data are reported consistent with the corridor when the
    free log-log slope of T* against <lambda> over the upper half of the
    lambda range lies between the two exponents (within ``slack``).  The
    slope over all points is reported too.  This is a diagnostic, not a test
    of the unknown constants.
    """
    pts = [(float(l), float(t)) for l, t in sweep]
    if len(pts) < 3:
        raise ValueError("need at least 3 (lambda, T*) points")
    lam = np.array([p[0] for p in pts])
    ts = np.array([p[1] for p in pts])
    if np.any(lam <= 0) or np.any(ts <= 0):
        raise ValueError("lambda and T* must be positive")
    if np.ptp(lam) == 0:
        raise ValueError("degenerate fit: all lambda equal")
    x = np.log(bracket(lam))
    y = np.log(ts)
    p_lo = lower_bound_exponent(n, sigma)
    p_up = UPPER_BOUND_EXPONENT

    res_lo = y - p_lo * x
    res_up = y - p_up * x
    C_lo = float(np.exp(res_lo.mean()))
    C_up = float(np.exp(res_up.mean()))
    slope = float(np.polyfit(x, y, 1)[0])
    tail = lam >= np.median(lam)
    tail_slope = float(np.polyfit(x[tail], y[tail], 1)[0])
    consistent = p_lo - slack <= tail_slope <= p_up + slack
    notes = []
    if tail_slope > p_up + slack:
        notes.append("decay slower than the upper-bound exponent")
    if tail_slope < p_lo - slack:
        notes.append("decay faster than the lower-bound exponent")
    return EnvelopeReport(
        p_lo, p_up, C_lo, C_up, slope, tail_slope,
        (float(np.exp(res_lo.min())), float(np.exp(res_lo.max()))),
        (float(np.exp(res_up.min())), float(np.exp(res_up.max()))),
        consistent, notes,
    )


def damping_threshold_functional(grid: Grid, u0: np.ndarray, n: int, sigma: float) -> float:
    """(|u0|_2^{sigma(2-(n-2)sigma)} |grad u0|_2^{n sigma^2})^{1/(sigma+1)}.

    Damping strengths above a (data independent) multiple of this value
    guarantee global existence.  The zero field gives 0.
    """
    m = math.sqrt(l2_norm_sq(grid, u0))
    if m == 0:
        return 0.0
    gn = math.sqrt(sum(l2_norm_sq(grid, d) for d in gradient(grid, u0)))
    e_mass = sigma * (2.0 - (n - 2) * sigma)
    e_grad = n * sigma**2
    return (m**e_mass * gn**e_grad) ** (1.0 / (sigma + 1.0))


def damping_homogeneity_exponent(n: int, sigma: float) -> float:
    """Degree of the damping functional under u0 -> c u0; always 2 sigma."""
    return (sigma * (2.0 - (n - 2) * sigma) + n * sigma**2) / (sigma + 1.0)


@dataclass
class MonotonicityReport:
    params: list[float]
    t_stars: list[float | None]
    direction: int  # -1 decreasing, +1 increasing, 0 undetermined
    violations: list[tuple[float, float]]
    monotone_prefix: tuple[float, float] | None
    monotone_suffix: tuple[float, float] | None
    no_blowup_boundary: tuple[float, float] | None
    no_blowup_params: list[float]

    @property
    def monotone(self) -> bool:
        return not self.violations

    def lines(self) -> list[str]:
        word = {-1: "decreasing", 1: "increasing", 0: "undetermined"}[self.direction]
        out = [
            f"points = {len(self.params)}",
            f"blowup_points = {sum(t is not None for t in self.t_stars)}",
            f"direction = {word}",
            f"monotone = {str(self.monotone).lower()}",
            f"violations = {len(self.violations)}",
        ]
        for lo, hi in self.violations:
            out.append(f"violation = {lo!r} -> {hi!r}")
        if self.monotone_prefix:
            out.append(f"monotone_prefix = {self.monotone_prefix[0]!r} .. {self.monotone_prefix[1]!r}")
        if self.monotone_suffix:
            out.append(f"monotone_suffix = {self.monotone_suffix[0]!r} .. {self.monotone_suffix[1]!r}")
        if self.no_blowup_boundary:
            lo, hi = self.no_blowup_boundary
            out.append(f"no_blowup_boundary = {lo!r} .. {hi!r}")
        if self.no_blowup_params:
            out.append("no_blowup_params = " + ", ".join(repr(p) for p in self.no_blowup_params))
        return out


def monotonicity_report(sweep, min_points: int = 3) -> MonotonicityReport:
    """Trend reversals of T* along an increasing parameter.

    ``sweep`` holds (param, T*) pairs, with T* = None where no blow-up was
    observed.  The dominant direction is the sign shared by most adjacent
    steps between blow-up points (ties go to the sign of last minus first);
    every adjacent step against it is a violation.
    """
    pts = [(float(p), None if t is None else float(t)) for p, t in sweep]
    params = [p for p, _ in pts]
    if any(b <= a for a, b in zip(params, params[1:])):
        raise ValueError("parameters must be strictly increasing")
    blow = [(p, t) for p, t in pts if t is not None]
    if len(blow) < min_points:
        raise ValueError(f"need at least {min_points} blow-up points, got {len(blow)}")

    steps = [(a[0], b[0], np.sign(b[1] - a[1])) for a, b in zip(blow, blow[1:])]
    up = sum(1 for *_, s in steps if s > 0)
    down = sum(1 for *_, s in steps if s < 0)
    if up != down:
        direction = 1 if up > down else -1
    else:
        direction = int(np.sign(blow[-1][1] - blow[0][1])) if len(blow) > 1 else 0
    violations = [(a, b) for a, b, s in steps if direction and s == -direction]

    prefix = suffix = None
    if len(blow) > 1 and direction:
        i = 0
        while i < len(steps) and steps[i][2] == direction:
            i += 1
        prefix = (blow[0][0], blow[i][0])
        j = len(steps)
        while j > 0 and steps[j - 1][2] == direction:
            j -= 1
        suffix = (blow[j][0], blow[-1][0])

    boundary = None
    for (p0, t0), (p1, t1) in zip(pts, pts[1:]):
        if (t0 is None) != (t1 is None):
            boundary = (p0, p1)
    no_blow = [p for p, t in pts if t is None]
    return MonotonicityReport(params, [t for _, t in pts], direction, violations, prefix,
                              suffix, boundary, no_blow)

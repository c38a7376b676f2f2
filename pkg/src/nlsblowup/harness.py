"""Single runs with time-step refinement, parameter sweeps and scheme comparison.

Time stepping
-------------
A run advances with steps from the ladder ``dt / 2**j``.  Before each step
``j`` is the smallest level for which the nonlinear phase picked up in one
step, ``dt_j * g(t) * max|u|^{2 sigma}``, stays below ``max_phase``; the
level may drop by at most one per step.  A collapsing solution therefore
gets steps that shrink with its amplitude, which is what lets the energies
grow by the four orders of magnitude the detector looks for.  Setting
``max_phase = None`` gives plain fixed-step integration.  Times are kept as
integer multiples of ``dt / 2**max_halvings`` so they add up exactly.

Refinement halves both ``dt`` and ``max_phase`` until two successive
blow-up times agree to ``t_star_tol``.
"""

from __future__ import annotations

import csv
import math
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .diagnostics import DEFAULT_THRESHOLD, BlowupDetector, BlowupVerdict, DiagRecord, measure
from .grid import Grid, make_grid
from .initial_data import ProfileSpec, build_initial
from .model import ModelParams, constant
from .relaxation import RelaxationSolver, RelaxationSolverError
from .theory import (MonotonicityReport, lambda_bound_envelope, monotonicity_report,
                     predict_conformal)
from .tssp import SplitStepSolver, density_power

SCHEMES = ("tssp", "rs")
AXES = ("lambda", "chirp_a", "delta", "amplitude_C")


class ConfigError(ValueError):
    """Invalid run or sweep configuration."""


@dataclass(frozen=True)
class GridSpec:
    dim: int = 1
    L: float = 8.0
    Np: int = 8192

    def build(self) -> Grid:
        try:
            return make_grid(self.dim, self.L, self.Np)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc


@dataclass(frozen=True)
class RefineSpec:
    enabled: bool = True
    t_star_tol: float = 0.02
    max_levels: int = 4  # halvings beyond the base run


@dataclass(frozen=True)
class RunConfig:
    profile: ProfileSpec
    model: ModelParams
    scheme: str = "tssp"
    grid: GridSpec = GridSpec()
    dt: float = 2e-5
    t_max: float = 3.0
    record_every: int = 1
    refine: RefineSpec = RefineSpec()
    threshold: float = DEFAULT_THRESHOLD
    max_phase: float | None = 0.1
    max_halvings: int = 14

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ConfigError(f"unknown scheme {self.scheme!r}")
        if not self.dt > 0 or not self.t_max > 0:
            raise ConfigError("dt and t_max must be positive")
        if self.record_every < 1:
            raise ConfigError("record_every must be >= 1")
        if self.max_phase is not None and not self.max_phase > 0:
            raise ConfigError("max_phase must be positive")
        if self.grid.dim != self.profile.dim or self.grid.dim != self.model.n:
            raise ConfigError("grid, profile and model dimensions disagree")
        self.grid.build()

    def halved(self) -> RunConfig:
        mp = None if self.max_phase is None else self.max_phase / 2
        return replace(self, dt=self.dt / 2, max_phase=mp)


@dataclass
class RunResult:
    verdict: BlowupVerdict
    records: list[DiagRecord]
    dt: float
    max_phase: float | None
    steps: int
    levels: list[tuple[float, float | None]] = field(default_factory=list)
    runtime: float = 0.0


class _TsspDriver:
    def __init__(self, grid, params, dt, u0):
        self.grid, self.params = grid, params
        self.solver = SplitStepSolver(grid, params, dt)
        self.u = u0
        self.spectrum = None

    def advance(self, t, dt):
        self.u = self.solver.step(self.u, t, dt)
        self.spectrum = self.solver.spectrum

    def max_density(self):
        u = self.u
        return float(np.max(density_power(u, self.params.sigma)))

    def measure(self, t):
        return measure(self.grid, self.u, t, self.params, self.spectrum)


class _RsDriver:
    def __init__(self, grid, params, dt, u0):
        self.grid, self.params = grid, params
        self.solver = RelaxationSolver(grid, params, dt)
        self.state = self.solver.init(u0)

    @property
    def u(self):
        return self.state.u

    def advance(self, t, dt):
        self.state = self.solver.step(self.state, dt)

    def max_density(self):
        return float(np.max(density_power(self.state.u, self.params.sigma)))

    def measure(self, t):
        return measure(self.grid, self.state.u, t, self.params)


def _level(dt: float, amp: float, max_phase: float, floor: int) -> int:
    if dt * amp <= max_phase:
        return floor
    return max(floor, math.ceil(math.log2(dt * amp / max_phase)))


def _integrate(cfg: RunConfig) -> tuple[BlowupVerdict, list[DiagRecord], int]:
    grid = cfg.grid.build()
    params = cfg.model
    u0 = build_initial(cfg.profile, grid)
    driver = (_TsspDriver if cfg.scheme == "tssp" else _RsDriver)(grid, params, cfg.dt, u0)

    H = cfg.max_halvings
    tick = cfg.dt / 2**H
    n_ticks = round(cfg.t_max / tick)
    horizon = None
    if params.coupling.kind == "conformal" and params.coupling.a > 0:
        horizon = round(params.coupling.a / tick)

    first = driver.measure(0.0)
    records = [first]
    det = BlowupDetector(first, cfg.threshold)
    ticks = steps = level = 0

    def stop(kind: str, t: float) -> tuple[BlowupVerdict, list[DiagRecord], int]:
        return BlowupVerdict(True, t, records[-1].humps, detection=kind), records, steps

    while ticks < n_ticks:
        t = ticks * tick
        if cfg.max_phase is not None:
            amp = params.g(t) * driver.max_density()
            level = _level(cfg.dt, amp, cfg.max_phase, max(0, level - 1))
            if level > H:
                return stop("unresolved", t)
        width = 2 ** (H - level)
        if horizon is not None and ticks + width >= horizon:
            return stop("unresolved", t)
        try:
            driver.advance(t, width * tick)
        except RelaxationSolverError:
            return stop("solver_failure", records[-1].t)
        ticks += width
        steps += 1
        if steps % cfg.record_every:
            continue
        with np.errstate(over="ignore", invalid="ignore"):
            rec = driver.measure(ticks * tick)
        if not rec.finite:
            return stop("overflow", records[-1].t)
        records.append(rec)
        if det.update(rec):
            return (BlowupVerdict(True, rec.t, det.last.humps, detection="threshold"),
                    records, steps)

    # survived to t_max: only a quiet end counts as global existence
    kin = [r.kinetic for r in records]
    if kin[-1] > 10.0 * statistics.median(kin):
        peak = max(range(len(kin)), key=kin.__getitem__)
        return BlowupVerdict(True, records[peak].t, records[peak].humps,
                             detection="unresolved"), records, steps
    return BlowupVerdict(False), records, steps


def _agree(a: BlowupVerdict, b: BlowupVerdict, tol: float) -> bool:
    if not a.blew_up and not b.blew_up:
        return True
    if a.detection == b.detection == "threshold":
        return abs(a.t_star - b.t_star) <= tol * b.t_star
    return False


def run_single(cfg: RunConfig) -> RunResult:
    """Integrate one configuration, refining the step until T* settles."""
    start = time.perf_counter()
    n_runs = cfg.refine.max_levels + 1 if cfg.refine.enabled else 1
    cur = cfg
    history = []
    converged = False
    for i in range(n_runs):
        verdict, records, steps = _integrate(cur)
        history.append((cur, verdict, records, steps))
        if i and _agree(history[-2][1], verdict, cfg.refine.t_star_tol):
            converged = True
            break
        if i + 1 < n_runs:
            cur = cur.halved()
    last_cfg, verdict, records, steps = history[-1]
    verdict = replace(verdict, resolution_converged=converged)
    return RunResult(
        verdict, records, last_cfg.dt, last_cfg.max_phase, steps,
        [(h[0].dt, h[1].t_star) for h in history], time.perf_counter() - start,
    )


def with_param(cfg: RunConfig, axis: str, value: float) -> RunConfig:
    """Copy of ``cfg`` with the sweep parameter set to ``value``."""
    value = float(value)
    c = cfg.model.coupling
    if axis == "lambda":
        return replace(cfg, model=cfg.model.with_coupling(lam=value))
    if axis == "delta":
        if c.kind != "damped":
            raise ConfigError("a delta sweep needs damped coupling")
        return replace(cfg, model=cfg.model.with_coupling(delta=value))
    if axis == "amplitude_C":
        return replace(cfg, profile=replace(cfg.profile, C=value))
    if axis == "chirp_a":
        if value == 0:
            raise ConfigError("chirp a must be nonzero")
        cfg = replace(cfg, profile=replace(cfg.profile, chirp=value))
        if c.kind == "conformal":
            cfg = replace(cfg, model=cfg.model.with_coupling(a=value))
        return cfg
    raise ConfigError(f"unknown sweep axis {axis!r}")


@dataclass
class SweepRow:
    param: float
    verdict: BlowupVerdict
    runtime: float
    predicted: float | None = None


@dataclass
class SweepResult:
    axis: str
    rows: list[SweepRow]
    report: MonotonicityReport
    reference_T: float | None = None

    @property
    def has_prediction(self) -> bool:
        return self.reference_T is not None

    def pairs(self) -> list[tuple[float, float | None]]:
        return [(r.param, r.verdict.t_star if r.verdict.blew_up else None) for r in self.rows]


def _run_point(args):
    cfg, axis, value = args
    res = run_single(with_param(cfg, axis, value))
    return SweepRow(float(value), res.verdict, res.runtime)


def reference_config(cfg: RunConfig) -> RunConfig:
    """Unchirped, constant-coupling version of a chirp-sweep base."""
    return replace(
        cfg,
        profile=replace(cfg.profile, chirp=None),
        model=replace(cfg.model, coupling=constant(cfg.model.coupling.lam)),
    )


def run_sweep(base: RunConfig, axis: str, values, workers: int = 1) -> SweepResult:
    """One independently refined run per parameter value.

    For chirp sweeps at critical power, or with conformal coupling, the
    unchirped reference is run as well and the conformal law fills the
    ``predicted`` column.
    """
    values = [float(v) for v in values]
    if not values:
        raise ConfigError("empty sweep")
    if axis not in AXES:
        raise ConfigError(f"unknown sweep axis {axis!r}")
    if any(b <= a for a, b in zip(values, values[1:])):
        raise ConfigError("sweep values must be strictly increasing")
    for v in values:
        with_param(base, axis, v)

    jobs = [(base, axis, v) for v in values]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_run_point, jobs))
    else:
        rows = [_run_point(j) for j in jobs]

    ref_T = None
    if axis == "chirp_a" and (base.model.critical or base.model.coupling.kind == "conformal"):
        ref = run_single(reference_config(base)).verdict
        if ref.blew_up:
            ref_T = ref.t_star
            for row in rows:
                row.predicted = predict_conformal(ref_T, row.param).t
    result = SweepResult(axis, rows, None, ref_T)
    result.report = monotonicity_report(result.pairs(), min_points=0)
    return result


@dataclass
class SchemeComparison:
    tssp: BlowupVerdict
    rs: BlowupVerdict
    gap: float | None


def compare_schemes(cfg: RunConfig) -> SchemeComparison:
    """Run both schemes with the same grid, steps and refinement policy."""
    a = run_single(replace(cfg, scheme="tssp")).verdict
    b = run_single(replace(cfg, scheme="rs")).verdict
    gap = None
    if a.blew_up and b.blew_up:
        gap = abs(a.t_star - b.t_star) / a.t_star
    return SchemeComparison(a, b, gap)


def _num(v) -> str:
    return "" if v is None else repr(float(v))


def sweep_rows(result: SweepResult) -> tuple[list[str], list[list[str]]]:
    header = ["param", "t_star", "blew_up", "humps", "converged"]
    if result.has_prediction:
        header.append("predicted_t_star")
    rows = []
    for r in result.rows:
        v = r.verdict
        row = [_num(r.param), _num(v.t_star), str(v.blew_up).lower(),
               "" if v.humps_at_blowup is None else str(v.humps_at_blowup),
               str(v.resolution_converged).lower()]
        if result.has_prediction:
            row.append(_num(r.predicted))
        rows.append(row)
    return header, rows


def write_sweep_csv(path, result: SweepResult) -> None:
    header, rows = sweep_rows(result)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def report_lines(result: SweepResult, n: int | None = None, sigma: float | None = None) -> list[str]:
    out = [f"axis = {result.axis}"] + result.report.lines()
    for r in result.rows:
        v = r.verdict
        if v.detection not in ("", "threshold"):
            out.append(f"flagged = {r.param!r} ({v.detection})")
    if result.has_prediction:
        out.append(f"reference_t_star = {result.reference_T!r}")
    if result.axis == "lambda" and n is not None:
        pts = [(p, t) for p, t in result.pairs() if t is not None]
        if len(pts) >= 3 and len({p for p, _ in pts}) > 1:
            env = lambda_bound_envelope(pts, n, sigma)
            out += [f"envelope_{k} = {v!r}" for k, v in env.as_dict().items()]
    return out


def write_report(path, result: SweepResult, n: int | None = None,
                 sigma: float | None = None) -> None:
    with open(path, "w") as fh:
        fh.write("\n".join(report_lines(result, n, sigma)) + "\n")

"""Acceptance criteria 1-10, one PASS/FAIL line each.

Criteria 4-8 and 10 integrate to blow-up at Np = 2^13 and take about an hour
together on one core.  Criterion 9 (2D) runs only with NLSBLOWUP_RUN_2D=1.
"""

import csv
import math
import os

import numpy as np
import pytest

from nlsblowup import catalog, cli
from nlsblowup.diagnostics import j_quantity
from nlsblowup.grid import l2_norm_sq, make_grid
from nlsblowup.harness import RunConfig, compare_schemes, run_single, run_sweep, with_param
from nlsblowup.initial_data import ProfileSpec, build_initial
from nlsblowup.model import ModelParams, constant
from nlsblowup.relaxation import RelaxationSolver, rs_energy
from nlsblowup.theory import (admissible_exponents, damping_homogeneity_exponent,
                              damping_threshold_functional, monotonicity_report, predict_conformal)
from nlsblowup.tssp import SplitStepSolver

pytestmark = pytest.mark.filterwarnings("ignore:.*subcritical")

TEST1 = ProfileSpec("single_gauss", 1.75, "log_cosh")


@pytest.fixture
def verdict(capsys):
    def emit(criterion, ok, detail):
        with capsys.disabled():
            print(f"\n[criterion {criterion}] {'PASS' if ok else 'FAIL'}: {detail}")
        assert ok, detail
    return emit


def _tssp(g, p, u, dt, steps, t0=0.0):
    s = SplitStepSolver(g, p, dt)
    for i in range(steps):
        u = s.step(u, t0 + i * dt)
    return u


def _rs(g, p, u0, dt, steps):
    solver = RelaxationSolver(g, p, dt)
    s = solver.init(u0)
    for _ in range(steps):
        s = solver.step(s)
    return s


def test_criterion_1_exact_algebra(verdict):
    dual = lambda p: p / (p - 1)
    worst, pairs = 0.0, 0
    for n in (1, 2, 3):
        for sigma in np.arange(0.5, 3.01, 0.25):
            if sigma < 2 / n or (n >= 3 and sigma >= 2 / (n - 2)):
                continue
            q, r, s, k = admissible_exponents(n, float(sigma))
            worst = max(worst, abs(1 / dual(r) - (1 / r + 2 * sigma / s)),
                        abs(1 / dual(q) - (1 / q + 2 * sigma / k)))
            pairs += 1
    g = make_grid(1, 8.0, 1024)
    u = build_initial(ProfileSpec("two_hump", 4.0, "log_cosh"), g)
    hom = 0.0
    for n, sigma in [(1, 2), (1, 3), (2, 1)]:
        hom = max(hom, abs(damping_homogeneity_exponent(n, sigma) - 2 * sigma))
    f1 = damping_threshold_functional(g, u, 1, 3)
    f2 = damping_threshold_functional(g, 2.0 * u, 1, 3)
    hom = max(hom, abs(math.log2(f2 / f1) - 6))
    ok = pairs > 0 and worst < 1e-14 and hom < 1e-12
    verdict(1, ok, f"{pairs} admissible pairs, max identity error {worst:.1e}; "
                   f"homogeneity error {hom:.1e}")


def _order_ratio(run, dt=1e-3, T=0.1):
    ref = run(dt / 16, T)
    return np.linalg.norm(run(dt, T) - ref) / np.linalg.norm(run(dt / 2, T) - ref)


def test_criterion_2_scheme_oracles(verdict):
    g = make_grid(1, 8.0, 4096)
    free = ModelParams(1, 2, constant(0.0))
    u = _tssp(g, free, np.exp(-g.x1d**2).astype(complex), 1e-4, 2000)
    z = 1.0 + 4j * 0.2
    err = math.sqrt(l2_norm_sq(g, u - np.exp(-g.x1d**2 / z) / np.sqrt(z)))

    u0 = build_initial(TEST1, g)
    solver = RelaxationSolver(g, free, 1e-4)
    s = solver.init(u0)
    m_prev, per_step = l2_norm_sq(g, u0), 0.0
    for _ in range(200):
        s = solver.step(s)
        m = l2_norm_sq(g, s.u)
        per_step = max(per_step, abs(m - m_prev) / m_prev)
        m_prev = m

    g2 = make_grid(1, 8.0, 2048)
    p = ModelParams(1, 2, constant(1.0))
    v0 = build_initial(TEST1, g2)
    r_tssp = _order_ratio(lambda dt, T: _tssp(g2, p, v0, dt, round(T / dt)))
    r_rs = _order_ratio(lambda dt, T: _rs(g2, p, v0, dt, round(T / dt)).u)
    ok = err < 1e-8 and per_step < 1e-12 and abs(r_tssp - 4) <= 0.3 and abs(r_rs - 4) <= 0.3
    verdict(2, ok, f"free Gaussian L2 error {err:.1e}; RS free mass drift {per_step:.1e}/step; "
                   f"order ratios TSSP {r_tssp:.3f}, RS {r_rs:.3f}")


def _conservation_1d():
    g = make_grid(1, 8.0, 4096)
    p = ModelParams(1, 2, constant(1.0))
    u0 = build_initial(TEST1, g)
    m0 = l2_norm_sq(g, u0)
    mass = abs(l2_norm_sq(g, _tssp(g, p, u0, 1e-5, 10_000)) - m0) / m0

    # the relaxation energy is exactly conserved for the cubic power
    p1 = ModelParams(1, 1, constant(2.0))
    solver = RelaxationSolver(g, p1, 1e-4)
    s = solver.step(solver.init(build_initial(ProfileSpec("two_hump", 2.0, "log_cosh"), g)))
    e0 = rs_energy(g, s, p1)
    for _ in range(2000):
        s = solver.step(s)
    energy = abs(rs_energy(g, s, p1) - e0) / abs(e0)

    # pseudo-conformal quantity, critical power, up to 0.8 T*
    prof = ProfileSpec("single_gauss", 1.75)
    T_star = run_single(RunConfig(prof, ModelParams(1, 2, constant(1.0)), t_max=1.0)).verdict.t_star
    dt = 2.5e-6
    steps = round(0.8 * T_star / dt)
    u = build_initial(prof, g)
    q0 = [j_quantity(g, u, 0.0, a, 2) for a in (0.0, 0.2)]
    chunk = steps // 4
    pc = 0.0
    for k in range(4):
        u = _tssp(g, p, u, dt, chunk, k * chunk * dt)
        t = (k + 1) * chunk * dt
        for a, q in zip((0.0, 0.2), q0):
            pc = max(pc, abs(j_quantity(g, u, t, a, 2) - q) / abs(q))
    return mass, energy, pc, T_star


def test_criterion_3_conservation(verdict):
    mass, energy, pc, T_star = _conservation_1d()
    ok = mass < 1e-11 and energy < 1e-6 and pc < 1e-4
    verdict(3, ok, f"TSSP mass drift {mass:.1e} over 1e4 steps; RS energy drift {energy:.1e}; "
                   f"pseudo-conformal drift {pc:.1e} up to 0.8 T* (T* = {T_star:.4f})")


def _table_check(criterion, name, verdict):
    entry = catalog.get(name)
    res = run_sweep(entry.base, entry.axis, entry.values)
    want, tol = entry.expect["t_star"], entry.expect["rel_tol"]
    errs = []
    for row, t in zip(res.rows, want):
        got = row.verdict.t_star
        errs.append(math.inf if got is None else abs(got - t) / t)
    got = ", ".join(f"{r.param}:{r.verdict.t_star if r.verdict.t_star is None else round(r.verdict.t_star, 4)}"
                    for r in res.rows)
    verdict(criterion, max(errs) <= tol, f"{name} T* = {got}; max rel error {max(errs):.3f} (tol {tol})")


@pytest.mark.slow
def test_criterion_4_test4_table(verdict):
    _table_check(4, "test4", verdict)


@pytest.mark.slow
def test_criterion_5_amplitude_table(verdict):
    _table_check(5, "amplitudes", verdict)


def _sweep(name, values=None):
    entry = catalog.get(name)
    return run_sweep(entry.base, entry.axis, entry.values if values is None else values)


def _threshold(res, centre, tol):
    """Bracket [last blow-up, first no-blow-up] must sit inside centre +- tol."""
    rep = res.report
    if rep.no_blowup_boundary is None:
        return False, "no threshold found"
    lo, hi = rep.no_blowup_boundary
    above = [r for r in res.rows if r.param > lo]
    clean = all(not r.verdict.blew_up for r in above)
    ok = clean and centre - tol - 1e-12 <= lo and hi <= centre + tol + 1e-12
    return ok, f"threshold in ({lo}, {hi}], expected {centre} +- {tol}"


@pytest.fixture(scope="module")
def test2_runs(tmp_path_factory):
    """Two independent `catalog test2` runs through the CLI."""
    dirs = [tmp_path_factory.mktemp(f"test2_{i}") for i in range(2)]
    codes = [cli.main(["catalog", "test2", "-o", str(d)]) for d in dirs]
    return codes, [d / "sweep.csv" for d in dirs]


def _csv_pairs(path):
    with open(path) as fh:
        return [(float(r["param"]), float(r["t_star"]) if r["t_star"] else None)
                for r in csv.DictReader(fh)]


@pytest.mark.slow
def test_criterion_6_qualitative_curves(verdict, test2_runs):
    parts, ok = [], True

    t1 = _sweep("test1")
    ts = [r.verdict.t_star for r in t1.rows]
    good = all(t is not None for t in ts) and all(a > b for a, b in zip(ts, ts[1:]))
    ok &= good
    parts.append(f"test1 strictly decreasing: {good}")

    codes, paths = test2_runs
    rep = monotonicity_report(_csv_pairs(paths[0]), min_points=0)
    good = codes[0] == 0 and bool(rep.violations) and all(
        1.5 < lo and hi < 2.3 for lo, hi in rep.violations)
    ok &= good
    parts.append(f"test2 violations {rep.violations}: {good}")

    # C = 3 data cannot blow up for lambda <= 3 (mass below 2 |Q|^2 / sqrt(3));
    # the reference-mass variant carries the monotonicity check
    t5 = _sweep("test5_mass")
    good = t5.report.monotone and sum(r.verdict.blew_up for r in t5.rows) >= 3
    ok &= good
    parts.append(f"test5 (reference mass) monotone: {good}, no blow-up at "
                 f"{t5.report.no_blowup_params}")

    t19 = _sweep("test19", (0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.7, 0.9, 1.0, 1.1, 1.15, 1.2))
    good_t, msg = _threshold(t19, 1.17, 0.1)
    good = good_t and not t19.report.monotone
    ok &= good
    parts.append(f"test19 non-monotone, {msg}: {good}")

    t20 = _sweep("test20", (0.0, 0.2, 0.4, 0.6, 0.7, 0.8, 0.85, 0.9, 0.91, 0.925))
    good_t, msg = _threshold(t20, 0.83, 0.1)
    good = good_t and t20.report.monotone
    ok &= good
    parts.append(f"test20 monotone, {msg}: {good}")

    t16 = _sweep("test16", (1.0, 1.4, 1.6, 1.7, 1.8, 1.85))
    good, msg = _threshold(t16, 1.75, 0.1)
    ok &= good
    slope = [r.verdict.t_star for r in t16.rows if r.verdict.blew_up]
    sign = "increasing" if slope[-1] > slope[0] else "decreasing"
    parts.append(f"test16 {msg} (T* {sign} in delta): {good}")

    verdict(6, ok, "; ".join(parts))


@pytest.mark.slow
@pytest.mark.parametrize("name", ["test9", "test10", "test11"])
def test_criterion_7_conformal_law(verdict, name):
    res = _sweep(name)
    T = res.reference_T
    worst, bad = 0.0, []
    for r in res.rows:
        a, v = r.param, r.verdict
        if predict_conformal(T, a).blows_up:
            if not v.blew_up:
                bad.append(a)
                continue
            worst = max(worst, abs(v.t_star - r.predicted) / r.predicted)
        elif v.blew_up:
            bad.append(a)
    ok = not bad and worst <= 0.03
    verdict(7, ok, f"{name}: T = {T:.5f}, max rel error {worst:.4f} (tol 0.03), "
                   f"branch mismatches {bad}")


@pytest.mark.slow
def test_criterion_8_cross_scheme(verdict):
    t15 = with_param(catalog.get("test15").base, "chirp_a", 1.0)
    c15 = compare_schemes(t15)
    t2 = with_param(catalog.get("test2").base, "lambda", 2.0)
    c2 = compare_schemes(t2)
    ok = (c15.gap is not None and c15.gap < 0.05 and c2.gap is not None and c2.gap < 0.02)
    verdict(8, ok, f"test15 a=1: TSSP {c15.tssp.t_star}, RS {c15.rs.t_star}, gap {c15.gap}; "
                   f"test2 lambda=2: TSSP {c2.tssp.t_star}, RS {c2.rs.t_star}, gap {c2.gap}")


@pytest.mark.slow
@pytest.mark.skipif(os.environ.get("NLSBLOWUP_RUN_2D") != "1",
                    reason="2D acceptance takes hours; set NLSBLOWUP_RUN_2D=1")
def test_criterion_9_two_dimensional(verdict):
    g = make_grid(2, 4.0, 512)
    p = ModelParams(2, 1, constant(1.0))
    u0 = build_initial(ProfileSpec("td_two_hump", 7.0, "radial_log_cosh"), g)
    m0 = l2_norm_sq(g, u0)
    mass = abs(l2_norm_sq(g, _tssp(g, p, u0, 1e-5, 10_000)) - m0) / m0
    solver = RelaxationSolver(g, p, 1e-5)
    s = solver.step(solver.init(u0))
    e0 = rs_energy(g, s, p)
    for _ in range(200):
        s = solver.step(s)
    energy = abs(rs_energy(g, s, p) - e0) / abs(e0)

    t7 = _sweep("test7")
    t18 = _sweep("test18")
    lo_hi = t18.report.no_blowup_boundary
    thr = lo_hi is not None and 1.0 <= lo_hi[0] and lo_hi[1] <= 1.8
    ok = mass < 1e-11 and energy < 1e-6 and bool(t7.report.violations) and thr
    verdict(9, ok, f"2D mass drift {mass:.1e}, RS energy drift {energy:.1e}; test7 violations "
                   f"{t7.report.violations}; test18 threshold bracket {lo_hi}")


@pytest.mark.slow
def test_criterion_10_determinism(verdict, test2_runs):
    codes, paths = test2_runs
    a, b = (p.read_bytes() for p in paths)
    ok = codes == [0, 0] and a == b and a.count(b"\n") == 1 + len(catalog.get("test2").values)
    verdict(10, ok, f"two `catalog test2` runs, sweep.csv identical: {a == b} ({len(a)} bytes)")

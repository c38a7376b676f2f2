import numpy as np
import pytest
from scipy.linalg import solve

from nlsblowup.grid import l2_norm_sq, make_grid
from nlsblowup.initial_data import ProfileSpec, build_initial
from nlsblowup.model import ModelParams, constant, damped
from nlsblowup.relaxation import (RelaxationSolver, RelaxationSolverError, fd_gradient_norm_sq,
                                  fd_laplacian, rs_energy, rs_init, rs_step,
                                  solve_cyclic_tridiagonal)

pytestmark = pytest.mark.filterwarnings("ignore:.*subcritical")

TEST1 = ProfileSpec("single_gauss", 1.75, "log_cosh")
TEST2 = ProfileSpec("two_hump", 4.0, "log_cosh")


def test_init_zero_and_constant():
    s = rs_init(np.zeros(16, dtype=complex), 2, 1e-3)
    assert not np.any(s.psi_half) and s.n_step == 0
    s = rs_init(np.full(16, 2.0 + 0j), 2, 1e-3)
    np.testing.assert_array_equal(s.psi_half, 16.0)
    with pytest.raises(ValueError):
        rs_init(np.zeros(4), 2, 0.0)


def test_init_test2_data():
    g = make_grid(1, 8.0, 1024)
    u0 = build_initial(TEST2, g)
    s = rs_init(u0, 2, 1e-3)
    np.testing.assert_allclose(s.psi_half, np.abs(u0) ** 4, rtol=1e-14)
    assert s.psi_half.max() == pytest.approx(np.max(np.abs(u0)) ** 4, rel=1e-14)
    assert np.isrealobj(s.psi_half)


@pytest.mark.parametrize("n", [3, 8, 33])
def test_cyclic_tridiagonal_against_dense(n, rng):
    a = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    c = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    b = 5 + rng.standard_normal(n) + 1j * rng.standard_normal(n)
    r = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    A = np.diag(b) + np.diag(a[1:], -1) + np.diag(c[:-1], 1)
    A[0, n - 1] = a[0]
    A[n - 1, 0] = c[n - 1]
    np.testing.assert_allclose(solve_cyclic_tridiagonal(a, b, c, r), solve(A, r), atol=1e-12)
    with pytest.raises(ValueError):
        solve_cyclic_tridiagonal(a[:2], b[:2], c[:2], r[:2])


def test_fd_operators():
    g = make_grid(1, np.pi, 64)
    f = np.exp(1j * g.x1d)
    # symbol of the 3-point Laplacian on a Fourier mode
    expected = -4 / g.dx**2 * np.sin(g.dx / 2) ** 2
    np.testing.assert_allclose(fd_laplacian(g, f), expected * f, atol=1e-12)
    assert fd_gradient_norm_sq(g, f) == pytest.approx(
        -float(np.vdot(f, fd_laplacian(g, f)).real) * g.cell, rel=1e-12)


def test_free_cn_conserves_mass_per_step():
    g = make_grid(1, 8.0, 1024)
    p = ModelParams(1, 2, constant(0.0))
    solver = RelaxationSolver(g, p, 1e-3)
    s = solver.init(build_initial(TEST1, g))
    m = l2_norm_sq(g, s.u)
    for _ in range(50):
        s = solver.step(s)
        m1 = l2_norm_sq(g, s.u)
        assert abs(m1 - m) / m < 1e-12
        m = m1


def test_constant_field_rotates():
    g = make_grid(1, 8.0, 64)
    p = ModelParams(1, 2, constant(1.0))
    s = rs_init(np.full(64, 1.3 + 0.2j), 2, 1e-2)
    for _ in range(10):
        s = rs_step(g, s, p)
    np.testing.assert_allclose(np.abs(s.u), abs(1.3 + 0.2j), rtol=1e-14)


def test_mass_conservation_many_steps():
    g = make_grid(1, 8.0, 1024)
    p = ModelParams(1, 2, constant(1.0))
    solver = RelaxationSolver(g, p, 1e-5)
    s = solver.init(build_initial(TEST1, g))
    m0 = l2_norm_sq(g, s.u)
    for _ in range(10_000):
        s = solver.step(s)
    assert abs(l2_norm_sq(g, s.u) - m0) / m0 < 1e-10


def test_cubic_energy_exactly_conserved():
    # sigma = 1: the scheme conserves |grad_D u|^2 - (g/2) sum psi^{n+1/2} psi^{n-1/2}
    g = make_grid(1, 8.0, 512)
    p = ModelParams(1, 1, constant(2.0))
    solver = RelaxationSolver(g, p, 1e-3)
    s = solver.init(build_initial(ProfileSpec("two_hump", 2.0, "log_cosh"), g))
    s = solver.step(s)
    e0 = rs_energy(g, s, p)
    for _ in range(500):
        s = solver.step(s)
    assert abs(rs_energy(g, s, p) - e0) / abs(e0) < 1e-10


def _energy_drift(dt, T=0.05):
    g = make_grid(1, 8.0, 1024)
    p = ModelParams(1, 2, constant(1.0))
    solver = RelaxationSolver(g, p, dt)
    s = solver.init(build_initial(TEST1, g))
    e0 = rs_energy(g, s, p)
    for _ in range(round(T / dt)):
        s = solver.step(s)
    return abs(rs_energy(g, s, p) - e0)


def test_quintic_energy_drift_second_order():
    r = _energy_drift(1e-3) / _energy_drift(5e-4)
    assert r == pytest.approx(4.0, abs=0.5)


def _run(g, p, u0, dt, T):
    solver = RelaxationSolver(g, p, dt)
    s = solver.init(u0)
    for _ in range(round(T / dt)):
        s = solver.step(s)
    return s.u


def test_second_order_self_convergence():
    g = make_grid(1, 8.0, 2048)
    p = ModelParams(1, 2, constant(1.0))
    u0 = build_initial(TEST1, g)
    dt = 1e-3
    ref = _run(g, p, u0, dt / 16, 0.1)
    e1 = np.linalg.norm(_run(g, p, u0, dt, 0.1) - ref)
    e2 = np.linalg.norm(_run(g, p, u0, dt / 2, 0.1) - ref)
    assert e1 / e2 == pytest.approx(4.0, abs=0.3)


def test_variable_step_reduces_to_fixed_step():
    g = make_grid(1, 8.0, 256)
    p = ModelParams(1, 2, damped(0.3))
    solver = RelaxationSolver(g, p, 1e-3)
    a = b = solver.init(build_initial(TEST1, g))
    for _ in range(5):
        a = solver.step(a)
        b = solver.step(b, 1e-3)
    np.testing.assert_array_equal(a.u, b.u)
    assert a.t == pytest.approx(5e-3)


def test_2d_krylov_matches_dense_solve():
    g = make_grid(2, 4.0, 16)
    p = ModelParams(2, 1, constant(1.0))
    u0 = build_initial(ProfileSpec("td_two_hump", 2.0, "radial_log_cosh"), g)
    solver = RelaxationSolver(g, p, 1e-3)
    s1 = solver.step(solver.init(u0))
    assert solver.iterations > 0
    # dense reference of (2i + dt(D + W)) u1 = (2i - dt(D + W)) u0
    n = g.size
    D = np.zeros((n, n))
    for j in range(n):
        e = np.zeros(n)
        e[j] = 1
        D[:, j] = fd_laplacian(g, e.reshape(g.shape)).ravel()
    W = np.diag(np.abs(u0.ravel()) ** 2)
    A = 2j * np.eye(n) + 1e-3 * (D + W)
    B = 2j * np.eye(n) - 1e-3 * (D + W)
    ref = solve(A, B @ u0.ravel())
    np.testing.assert_allclose(s1.u.ravel(), ref, atol=1e-9)
    assert abs(l2_norm_sq(g, s1.u) - l2_norm_sq(g, u0)) / l2_norm_sq(g, u0) < 1e-9


def test_2d_nonconvergence_is_reported():
    g = make_grid(2, 4.0, 16)
    p = ModelParams(2, 1, constant(1.0))
    solver = RelaxationSolver(g, p, 1e-1, maxiter=1, tol=1e-15)
    s = solver.init(build_initial(ProfileSpec("td_two_hump", 3.0, "radial_log_cosh"), g))
    with pytest.raises(RelaxationSolverError):
        solver.step(s)


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        RelaxationSolver(make_grid(1, 8.0, 64), ModelParams(2, 1), 1e-3)

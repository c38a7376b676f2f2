"""Relaxation scheme: Crank-Nicolson in u with a staggered auxiliary density.

With ``psi ~ |u|^{2 sigma}`` carried at half steps, one step reads

    (psi^{n+1/2} + psi^{n-1/2}) / 2 = |u^n|^{2 sigma}
    i (u^{n+1} - u^n)/dt + D((u^{n+1} + u^n)/2) = -g(t_{n+1/2}) psi^{n+1/2} (u^{n+1} + u^n)/2

where D is the periodic second-order finite-difference Laplacian.  Because
psi is real the update is a Cayley transform of a Hermitian operator, so
the discrete L2 norm is preserved exactly.  In 1D the linear system is
cyclic tridiagonal; in 2D it is solved matrix-free with BiCGSTAB.

Steps of unequal length are allowed: psi is then extrapolated linearly to
the new half step, ``psi^{n+1/2} = rho^n + (dt_n / dt_{n-1}) (rho^n - psi^{n-1/2})``
with ``rho^n = |u^n|^{2 sigma}``, which is the relation above when the steps
are equal.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import lapack
from scipy.sparse.linalg import LinearOperator, bicgstab

from .grid import Grid
from .model import ModelParams
from .tssp import density_power


class RelaxationSolverError(RuntimeError):
    """The implicit solve failed (non-convergence or non-finite values)."""


@dataclass(frozen=True)
class RsState:
    """``psi_half`` sits half of ``dt`` (the previous step) behind ``t``."""

    u: np.ndarray
    psi_half: np.ndarray
    n_step: int
    dt: float
    t: float = 0.0


def rs_init(u0: np.ndarray, sigma: float, dt: float) -> RsState:
    """Start-up with psi^{-1/2} = |u^0|^{2 sigma}."""
    if not dt > 0:
        raise ValueError("dt must be positive")
    u0 = np.asarray(u0, dtype=complex)
    return RsState(u0.copy(), density_power(u0, sigma), 0, float(dt))


def solve_cyclic_tridiagonal(a, b, c, r):
    """Solve a periodic tridiagonal system.

    Row i reads ``a[i] x[i-1] + b[i] x[i] + c[i] x[i+1] = r[i]`` with indices
    taken modulo n.  The two corner entries are removed by a rank-one
    (Sherman-Morrison) correction and the remaining tridiagonal system is
    factorised once for both right-hand sides.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    c = np.asarray(c, dtype=complex)
    r = np.asarray(r, dtype=complex)
    n = b.size
    if n < 3:
        raise ValueError("cyclic system needs at least 3 unknowns")
    beta = a[0]       # A[0, n-1]
    alpha = c[n - 1]  # A[n-1, 0]
    gamma = -b[0]
    bb = b.copy()
    bb[0] -= gamma
    bb[n - 1] -= alpha * beta / gamma

    rhs = np.zeros((n, 2), dtype=complex)
    rhs[:, 0] = r
    rhs[0, 1] = gamma
    rhs[n - 1, 1] = alpha
    *_, sol, info = lapack.zgtsv(a[1:], bb, c[:-1], rhs)
    if info != 0:
        raise RelaxationSolverError(f"tridiagonal factorisation failed (info={info})")
    y, z = sol[:, 0], sol[:, 1]
    vy = y[0] + beta / gamma * y[n - 1]
    vz = z[0] + beta / gamma * z[n - 1]
    return y - (vy / (1.0 + vz)) * z


def fd_laplacian(grid: Grid, u: np.ndarray) -> np.ndarray:
    out = -2.0 * grid.dim * u
    for ax in range(grid.dim):
        out = out + np.roll(u, 1, axis=ax) + np.roll(u, -1, axis=ax)
    return out / grid.dx**2


def fd_gradient_norm_sq(grid: Grid, u: np.ndarray) -> float:
    """Discrete Dirichlet form, equal to -<D u, u>."""
    total = 0.0
    for ax in range(grid.dim):
        d = np.roll(u, -1, axis=ax) - u
        total += float(np.sum(d.real**2 + d.imag**2))
    return total * grid.cell / grid.dx**2


class RelaxationSolver:
    """Relaxation integrator on a periodic grid; ``dt`` is the default step.

    ``tol`` and ``maxiter`` only matter in 2D (Krylov solve).
    """

    def __init__(self, grid: Grid, params: ModelParams, dt: float, tol: float = 1e-10,
                 maxiter: int = 10_000):
        if params.n != grid.dim:
            raise ValueError("model dimension does not match the grid")
        self.grid = grid
        self.params = params
        self.dt = float(dt)
        self.tol = tol
        self.maxiter = maxiter
        self.iterations = 0

    def init(self, u0: np.ndarray) -> RsState:
        return rs_init(u0, self.params.sigma, self.dt)

    def step(self, state: RsState, dt: float | None = None) -> RsState:
        grid = self.grid
        dt = self.dt if dt is None else float(dt)
        u = state.u
        rho = density_power(u, self.params.sigma)
        psi = rho + (dt / state.dt) * (rho - state.psi_half)
        w = self.params.g(state.t + 0.5 * dt) * psi
        # (2i + dt (D + W)) u^{n+1} = (2i - dt (D + W)) u^n
        rhs = (2j - dt * w) * u - dt * fd_laplacian(grid, u)
        if grid.dim == 1:
            unew = self._solve_1d(w, rhs, dt)
        else:
            unew = self._solve_2d(w, rhs, u, dt)
        if not np.all(np.isfinite(unew)):
            raise RelaxationSolverError(f"non-finite values after step {state.n_step + 1}")
        return RsState(unew, psi, state.n_step + 1, dt, state.t + dt)

    def _solve_1d(self, w, rhs, dt):
        s = dt / self.grid.dx**2
        off = np.full(self.grid.Np, s, dtype=complex)
        diag = 2j + dt * w - 2.0 * s
        return solve_cyclic_tridiagonal(off, diag, off, rhs)

    def _solve_2d(self, w, rhs, guess, dt):
        grid = self.grid
        shape = grid.shape
        diag = (2j + dt * w - 4.0 * dt / grid.dx**2).ravel()

        def matvec(v):
            v = v.reshape(shape)
            return ((2j + dt * w) * v + dt * fd_laplacian(grid, v)).ravel()

        A = LinearOperator((grid.size, grid.size), matvec=matvec, dtype=complex)
        M = LinearOperator((grid.size, grid.size), matvec=lambda v: v / diag, dtype=complex)
        count = [0]

        def tally(_):
            count[0] += 1

        x, info = bicgstab(A, rhs.ravel(), x0=guess.ravel(), rtol=self.tol, atol=0.0,
                           maxiter=self.maxiter, M=M, callback=tally)
        self.iterations = count[0]
        if info != 0:
            raise RelaxationSolverError(f"Krylov solve did not converge (info={info})")
        return x.reshape(shape)


def rs_step(grid: Grid, state: RsState, params: ModelParams) -> RsState:
    return RelaxationSolver(grid, params, state.dt).step(state)


def rs_energy(grid: Grid, state: RsState, params: ModelParams) -> float:
    """Discrete energy of a relaxation state.

    For the cubic case (sigma = 1) this is the functional the scheme
    conserves exactly for constant coupling,
    ``|grad_D u^n|^2 - (g/2) sum psi^{n+1/2} psi^{n-1/2}``.  For other powers
    no exactly conserved functional is available and the continuum energy
    with the discrete Dirichlet form is returned instead.
    """
    g = params.g(state.t)
    kin = fd_gradient_norm_sq(grid, state.u)
    sigma = params.sigma
    if sigma == 1:
        psi_next = 2.0 * density_power(state.u, 1) - state.psi_half
        pot = 0.5 * g * float(np.sum(psi_next * state.psi_half)) * grid.cell
    else:
        rho = state.u.real**2 + state.u.imag**2
        pot = g / (sigma + 1) * float(np.sum(rho ** (sigma + 1))) * grid.cell
    return kin - pot


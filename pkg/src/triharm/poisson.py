"""Direct solvers for the compact scheme ``Λ*Y = ψ*`` with Dirichlet data.

:func:`solve_compact` diagonalises the x-direction (or y-direction) second
difference with a type-I discrete sine transform, which turns the nine-point
system into one tridiagonal system per sine mode. :func:`solve_dense_oracle`
assembles the same system as a dense matrix and is kept for verification.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.fft import dst, idst

from .grid import Grid2D, GridFunction
from .stencil import StencilContext, lambda_star_values, modified_rhs_values, second_difference_eigenvalue

DENSE_LIMIT = 10_000

# Residuals for iterative refinement are formed in extended precision when
# the platform has it (x87 80-bit on x86-64 Linux); otherwise plain float64.
_EXT = np.longdouble if np.finfo(np.longdouble).eps < np.finfo(np.float64).eps else np.float64


@dataclass(frozen=True)
class DirichletProblem:
    """``Δy = ψ`` in the domain, ``y = μ`` on the boundary.

    ``psi`` is needed on every node (the modified right-hand side reads the
    boundary ring). Only the boundary entries of ``mu`` are used.
    """

    psi: GridFunction
    mu: GridFunction

    def __post_init__(self):
        if self.psi.grid != self.mu.grid:
            raise ValueError("psi and mu live on different grids")

    @property
    def grid(self) -> Grid2D:
        return self.psi.grid

    @classmethod
    def homogeneous(cls, psi: GridFunction) -> DirichletProblem:
        return cls(psi, GridFunction.zeros(psi.grid))


def _boundary_only(mu: np.ndarray) -> np.ndarray:
    out = mu.copy()
    out[1:-1, 1:-1] = 0.0
    return out


def _reduced_rhs(p: DirichletProblem) -> tuple[np.ndarray, np.ndarray]:
    """Boundary lift and the interior right-hand side for the homogeneous remainder."""
    grid = p.grid
    lift = _boundary_only(p.mu.values)
    rhs = modified_rhs_values(p.psi.values, grid) - lambda_star_values(lift, grid)
    return lift, rhs[1:-1, 1:-1]


def _thomas(lower, diag, upper, rhs):
    """Batched tridiagonal solve along axis 1.

    ``lower``/``upper`` are per-system off-diagonal constants, ``diag`` the
    per-system diagonal constant; all of shape ``(m, 1)``. ``rhs`` is ``(m, n)``.
    No pivoting: callers guarantee diagonal dominance.
    """
    m, n = rhs.shape
    cp = np.empty((m, n))
    dp = np.empty((m, n))
    cp[:, 0:1] = upper / diag
    dp[:, 0] = rhs[:, 0] / diag[:, 0]
    for k in range(1, n):
        denom = diag[:, 0] - lower[:, 0] * cp[:, k - 1]
        cp[:, k] = upper[:, 0] / denom
        dp[:, k] = (rhs[:, k] - lower[:, 0] * dp[:, k - 1]) / denom
    x = np.empty((m, n))
    x[:, -1] = dp[:, -1]
    for k in range(n - 2, -1, -1):
        x[:, k] = dp[:, k] - cp[:, k] * x[:, k + 1]
    return x


def _solve_homogeneous(rhs: np.ndarray, grid: Grid2D) -> np.ndarray:
    """Interior solution of ``Λ*Z = rhs`` with ``Z = 0`` on the boundary."""
    # Transform along the axis with the larger spacing: then 1 + c λ_p >= 1/3
    # and every per-mode tridiagonal system is diagonally dominant.
    transpose = grid.h2 > grid.h1
    if transpose:
        rhs = rhs.T
        n_s, h_s, n_t, h_t = grid.ny, grid.h2, grid.nx, grid.h1
    else:
        n_s, h_s, n_t, h_t = grid.nx, grid.h1, grid.ny, grid.h2
    c = StencilContext(grid).c

    lam = second_difference_eigenvalue(np.arange(1, n_s), n_s, h_s)[:, None]
    alpha = 1.0 + c * lam
    off = alpha / h_t**2
    diag = lam - 2.0 * alpha / h_t**2

    rhs_hat = dst(rhs, type=1, axis=0)
    z_hat = _thomas(off, diag, off, rhs_hat)
    z = idst(z_hat, type=1, axis=0)
    return z.T if transpose else z


def _check_finite(p: DirichletProblem) -> None:
    if not (np.isfinite(p.psi.values).all() and np.isfinite(p.mu.values).all()):
        raise ValueError("non-finite problem data")


def _residual_ext(psi: np.ndarray, y: np.ndarray, grid: Grid2D) -> np.ndarray:
    r = modified_rhs_values(psi.astype(_EXT), grid) - lambda_star_values(y.astype(_EXT), grid)
    return r[1:-1, 1:-1]


def solve_compact(p: DirichletProblem, refine: int = 1) -> GridFunction:
    """Fast direct solve of the compact fourth-order scheme, O(N log N).

    ``refine`` steps of iterative refinement bring the residual down to the
    level set by rounding the solution itself to float64.
    """
    _check_finite(p)
    grid = p.grid
    lift, rhs = _reduced_rhs(p)
    y = lift
    y[1:-1, 1:-1] = _solve_homogeneous(rhs, grid)
    for _ in range(refine):
        r = _residual_ext(p.psi.values, y, grid)
        y[1:-1, 1:-1] += _solve_homogeneous(r.astype(np.float64), grid)
    return GridFunction(grid, y)


def assemble_dense(grid: Grid2D) -> np.ndarray:
    """Dense matrix of ``Λ*`` restricted to interior unknowns (row-major in i, j)."""
    mi, mj = grid.nx - 1, grid.ny - 1
    h1s, h2s = grid.h1**2, grid.h2**2
    c = StencilContext(grid).c
    w = {}
    w[0, 0] = -2.0 / h1s - 2.0 / h2s + 4.0 * c / (h1s * h2s)
    w[-1, 0] = w[1, 0] = 1.0 / h1s - 2.0 * c / (h1s * h2s)
    w[0, -1] = w[0, 1] = 1.0 / h2s - 2.0 * c / (h1s * h2s)
    for di in (-1, 1):
        for dj in (-1, 1):
            w[di, dj] = c / (h1s * h2s)
    A = np.zeros((mi * mj, mi * mj))
    for i in range(mi):
        for j in range(mj):
            row = i * mj + j
            for (di, dj), coef in w.items():
                ii, jj = i + di, j + dj
                if 0 <= ii < mi and 0 <= jj < mj:
                    A[row, ii * mj + jj] = coef
    return A


def solve_dense_oracle(p: DirichletProblem) -> GridFunction:
    """Reference solve by dense LU with partial pivoting. Small grids only."""
    grid = p.grid
    n = (grid.nx - 1) * (grid.ny - 1)
    if n > DENSE_LIMIT:
        raise ValueError(f"{n} interior unknowns exceeds dense limit {DENSE_LIMIT}")
    _check_finite(p)
    lift, rhs = _reduced_rhs(p)
    z = np.linalg.solve(assemble_dense(grid), rhs.reshape(-1))
    y = lift
    y[1:-1, 1:-1] = z.reshape(grid.nx - 1, grid.ny - 1)
    return GridFunction(grid, y)


def residual(p: DirichletProblem, y: GridFunction) -> float:
    """Max interior ``|Λ*y - ψ*|``."""
    if y.grid != p.grid:
        raise ValueError("solution and problem live on different grids")
    return float(np.max(np.abs(_residual_ext(p.psi.values, y.values, p.grid))))


def rhs_scale(p: DirichletProblem) -> float:
    """``max|ψ*|`` over interior nodes; the scale used by the residual bound."""
    return float(np.max(np.abs(modified_rhs_values(p.psi.values, p.grid))))

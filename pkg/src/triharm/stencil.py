"""Compact nine-point difference operators.

Each operator returns a full-size field. Entries where the stencil would
leave the grid are set to zero by convention; consumers only read interior
nodes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import Grid2D, GridFunction


@dataclass(frozen=True)
class StencilContext:
    grid: Grid2D

    @property
    def c(self) -> float:
        """Compact-correction coefficient ``(h1^2 + h2^2) / 12``."""
        return (self.grid.h1**2 + self.grid.h2**2) / 12.0


def _d2_x1(a: np.ndarray, h1: float) -> np.ndarray:
    out = np.zeros_like(a)
    out[1:-1, :] = (a[:-2, :] - 2.0 * a[1:-1, :] + a[2:, :]) / h1**2
    return out


def _d2_x2(a: np.ndarray, h2: float) -> np.ndarray:
    out = np.zeros_like(a)
    out[:, 1:-1] = (a[:, :-2] - 2.0 * a[:, 1:-1] + a[:, 2:]) / h2**2
    return out


def _interior_only(a: np.ndarray) -> np.ndarray:
    out = np.zeros_like(a)
    out[1:-1, 1:-1] = a[1:-1, 1:-1]
    return out


def apply_lambda1(y: GridFunction) -> GridFunction:
    """Second difference in x1; valid on columns ``1..nx-1`` for every j."""
    return GridFunction(y.grid, _d2_x1(y.values, y.grid.h1))


def apply_lambda2(y: GridFunction) -> GridFunction:
    """Second difference in x2; valid on rows ``1..ny-1`` for every i."""
    return GridFunction(y.grid, _d2_x2(y.values, y.grid.h2))


def apply_lambda(y: GridFunction) -> GridFunction:
    g = y.grid
    return GridFunction(g, _interior_only(_d2_x1(y.values, g.h1) + _d2_x2(y.values, g.h2)))


def lambda_star_values(a: np.ndarray, grid: Grid2D) -> np.ndarray:
    # Λ1 on the full x1 range of every row, then Λ2 on top: Λ1Λ2 reads the corners.
    d1 = _d2_x1(a, grid.h1)
    d2 = _d2_x2(a, grid.h2)
    cross = _d2_x2(d1, grid.h2)
    c = StencilContext(grid).c
    return _interior_only(d1 + d2 + c * cross)


def apply_lambda_star(y: GridFunction) -> GridFunction:
    """``Λ1 y + Λ2 y + c Λ1Λ2 y`` at interior nodes."""
    return GridFunction(y.grid, lambda_star_values(y.values, y.grid))


def modified_rhs_values(psi: np.ndarray, grid: Grid2D) -> np.ndarray:
    h1, h2 = grid.h1, grid.h2
    out = psi + h1**2 / 12.0 * _d2_x1(psi, h1) + h2**2 / 12.0 * _d2_x2(psi, h2)
    return _interior_only(out)


def modified_rhs(psi: GridFunction) -> GridFunction:
    """``ψ + h1²/12 Λ1ψ + h2²/12 Λ2ψ`` at interior nodes.

    ``psi`` must carry values on the boundary: the ring of nodes next to the
    boundary reads them.
    """
    return GridFunction(psi.grid, modified_rhs_values(psi.values, psi.grid))


def second_difference_eigenvalue(p: int | np.ndarray, n: int, h: float):
    """Eigenvalue of the 1D Dirichlet second difference for mode ``sin(p π x / L)``."""
    return -4.0 / h**2 * np.sin(np.pi * np.asarray(p) / (2.0 * n)) ** 2

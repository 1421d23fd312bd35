"""Uniform rectangular grids and nodal fields."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np


class GridMismatchError(ValueError):
    pass


@dataclass(frozen=True)
class Grid2D:
    """Uniform grid on ``[0, lx] x [0, ly]`` with ``nx + 1`` by ``ny + 1`` nodes.

    Node ``(i, j)`` sits at ``(i * h1, j * h2)``.
    """

    nx: int
    ny: int
    lx: float = 1.0
    ly: float = 1.0

    def __post_init__(self):
        if int(self.nx) != self.nx or int(self.ny) != self.ny:
            raise ValueError("node counts must be integers")
        if self.nx < 2 or self.ny < 2:
            raise ValueError(f"need nx, ny >= 2, got ({self.nx}, {self.ny})")
        if not (self.lx > 0 and self.ly > 0) or not np.isfinite([self.lx, self.ly]).all():
            raise ValueError(f"extents must be positive and finite, got ({self.lx}, {self.ly})")

    @property
    def h1(self) -> float:
        return self.lx / self.nx

    @property
    def h2(self) -> float:
        return self.ly / self.ny

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nx + 1, self.ny + 1)

    @property
    def x1(self) -> np.ndarray:
        return np.arange(self.nx + 1) * self.h1

    @property
    def x2(self) -> np.ndarray:
        return np.arange(self.ny + 1) * self.h2

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        """Coordinate arrays of shape ``(nx+1, ny+1)``, indexed ``(i, j)``."""
        return np.meshgrid(self.x1, self.x2, indexing="ij")

    def boundary_mask(self) -> np.ndarray:
        mask = np.zeros(self.shape, dtype=bool)
        mask[0, :] = mask[-1, :] = True
        mask[:, 0] = mask[:, -1] = True
        return mask

    def label(self) -> str:
        return f"{self.nx}x{self.ny}"


def make_grid(nx: int, ny: int | None = None, lx: float = 1.0, ly: float = 1.0) -> Grid2D:
    return Grid2D(nx, nx if ny is None else ny, float(lx), float(ly))


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Real nodal field on a :class:`Grid2D`.

    Operations return new fields; ``values`` is stored read-only so callers
    cannot alias and mutate a field that another object holds.
    """

    grid: Grid2D
    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.shape != self.grid.shape:
            raise ValueError(f"values shape {values.shape} does not match grid {self.grid.shape}")
        if not np.isfinite(values).all():
            i, j = np.argwhere(~np.isfinite(values))[0]
            raise ValueError(f"non-finite value at node ({i}, {j})")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @classmethod
    def zeros(cls, grid: Grid2D) -> GridFunction:
        return cls(grid, np.zeros(grid.shape))

    @classmethod
    def constant(cls, grid: Grid2D, c: float) -> GridFunction:
        return cls(grid, np.full(grid.shape, float(c)))

    @classmethod
    def sample(cls, grid: Grid2D, func: Callable[[np.ndarray, np.ndarray], np.ndarray]) -> GridFunction:
        """Evaluate a vectorised ``func(x1, x2)`` at every node."""
        X1, X2 = grid.mesh()
        return cls(grid, np.broadcast_to(func(X1, X2), grid.shape))

    def _check(self, other: GridFunction) -> None:
        if other.grid != self.grid:
            raise GridMismatchError(f"grids differ: {self.grid} vs {other.grid}")

    def __add__(self, other):
        if isinstance(other, GridFunction):
            self._check(other)
            return GridFunction(self.grid, self.values + other.values)
        return GridFunction(self.grid, self.values + other)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, GridFunction):
            self._check(other)
            return GridFunction(self.grid, self.values - other.values)
        return GridFunction(self.grid, self.values - other)

    def __mul__(self, a: float) -> GridFunction:
        return GridFunction(self.grid, a * self.values)

    __rmul__ = __mul__

    def __neg__(self) -> GridFunction:
        return GridFunction(self.grid, -self.values)

    def interior(self) -> np.ndarray:
        return self.values[1:-1, 1:-1]


def max_norm(y: GridFunction, interior: bool = False) -> float:
    """Max of ``|y|`` over all nodes, or over interior nodes only."""
    vals = y.interior() if interior else y.values
    return float(np.max(np.abs(vals)))


def max_diff_norm(a: GridFunction, b: GridFunction, interior: bool = False) -> float:
    if a.grid != b.grid:
        raise GridMismatchError(f"grids differ: {a.grid} vs {b.grid}")
    diff = a.values - b.values
    if interior:
        diff = diff[1:-1, 1:-1]
    return float(np.max(np.abs(diff)))


def sample_coincident(fine: GridFunction, coarse_grid: Grid2D) -> GridFunction:
    """Restrict ``fine`` to the nodes it shares with ``coarse_grid`` (injection)."""
    g = fine.grid
    if not (np.isclose(g.lx, coarse_grid.lx) and np.isclose(g.ly, coarse_grid.ly)):
        raise GridMismatchError("grids cover different domains")
    if g.nx % coarse_grid.nx or g.ny % coarse_grid.ny:
        raise GridMismatchError(f"{g.label()} is not a refinement of {coarse_grid.label()}")
    sx, sy = g.nx // coarse_grid.nx, g.ny // coarse_grid.ny
    return GridFunction(coarse_grid, fine.values[::sx, ::sy])

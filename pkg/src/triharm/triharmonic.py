"""Fixed-point iteration for ``Δ³u = f(x, u, Δu, Δ²u)`` with Navier-type data.

Each sweep solves three chained Dirichlet problems with the compact scheme::

    Λ*W = Φ*,  W = g3 on the boundary
    Λ*V = W*,  V = g2
    Λ*U = V*,  U = g1

and then sets ``Φ <- f(x, U, V, W)``. The loop stops when the interior
max-norm change of ``Φ`` drops to ``tol``.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .grid import Grid2D, GridFunction, max_diff_norm, max_norm
from .poisson import DirichletProblem, solve_compact

log = logging.getLogger(__name__)

NonlinearTerm = Callable[[np.ndarray, np.ndarray, np.ndarray, np.ndarray, np.ndarray], np.ndarray]
FieldFunction = Callable[[np.ndarray, np.ndarray], np.ndarray]


@dataclass(frozen=True)
class BoundaryData:
    """Values of ``u``, ``Δu`` and ``Δ²u`` on the boundary; ``None`` means zero."""

    g1: Optional[FieldFunction] = None
    g2: Optional[FieldFunction] = None
    g3: Optional[FieldFunction] = None

    @property
    def homogeneous(self) -> bool:
        return self.g1 is None and self.g2 is None and self.g3 is None

    def sampled(self, grid: Grid2D) -> tuple[GridFunction, GridFunction, GridFunction]:
        """Sample g1, g2, g3 on the boundary nodes; interior entries are zero."""
        mask = grid.boundary_mask()
        out = []
        for g in (self.g1, self.g2, self.g3):
            if g is None:
                out.append(GridFunction.zeros(grid))
            else:
                vals = np.where(mask, GridFunction.sample(grid, g).values, 0.0)
                out.append(GridFunction(grid, vals))
        return tuple(out)


@dataclass(frozen=True)
class ProblemSpec:
    grid: Grid2D
    f: NonlinearTerm
    bc: BoundaryData = field(default_factory=BoundaryData)
    exact: Optional[FieldFunction] = None
    tol: float = 1e-8
    max_iter: int = 200
    name: str = ""

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError(f"tol must be positive, got {self.tol}")
        if self.max_iter < 1:
            raise ValueError(f"max_iter must be >= 1, got {self.max_iter}")


@dataclass(frozen=True)
class SolutionTriple:
    U: GridFunction
    V: GridFunction
    W: GridFunction


@dataclass
class IterationReport:
    K: int
    deviations: list[float]
    d: float
    converged: bool
    error_vs_exact: Optional[float] = None
    u_change: Optional[float] = None
    wall_time: float = 0.0
    phi_norm: float = 0.0
    error_history: list[float] = field(default_factory=list)

    @property
    def final_deviation(self) -> float:
        return self.deviations[-1]


def _evaluate_f(spec: ProblemSpec, u, v, w) -> GridFunction:
    grid = spec.grid
    X1, X2 = grid.mesh()
    with np.errstate(all="ignore"):
        vals = np.asarray(spec.f(X1, X2, u, v, w), dtype=float)
    vals = np.broadcast_to(vals, grid.shape)
    bad = ~np.isfinite(vals)
    if bad.any():
        i, j = np.argwhere(bad)[0]
        raise FloatingPointError(
            f"f is not finite at node ({i}, {j}), x = ({X1[i, j]:.6g}, {X2[i, j]:.6g})"
        )
    return GridFunction(grid, vals)


def initial_phi(spec: ProblemSpec) -> GridFunction:
    """``f(x, 0, 0, 0)`` inside, ``f(x, g1, g2, g3)`` on the boundary."""
    g1, g2, g3 = spec.bc.sampled(spec.grid)
    return _evaluate_f(spec, g1.values, g2.values, g3.values)


def _chain(spec: ProblemSpec, phi: GridFunction, bvals) -> SolutionTriple:
    g1, g2, g3 = bvals
    W = solve_compact(DirichletProblem(phi, g3))
    V = solve_compact(DirichletProblem(W, g2))
    U = solve_compact(DirichletProblem(V, g1))
    return SolutionTriple(U, V, W)


def sweep(spec: ProblemSpec, phi: GridFunction) -> tuple[SolutionTriple, GridFunction]:
    """One outer step: the three chained solves, then the new ``Φ``.

    On the boundary the new ``Φ`` equals ``f(x, g1, g2, g3)`` because the
    solves impose ``U, V, W`` there exactly.
    """
    triple = _chain(spec, phi, spec.bc.sampled(spec.grid))
    return triple, _evaluate_f(spec, triple.U.values, triple.V.values, triple.W.values)


def solve(spec: ProblemSpec, track_errors: bool = False) -> tuple[SolutionTriple, IterationReport]:
    """Iterate from ``Φ0`` until the interior change of ``Φ`` is at most ``tol``.

    ``K`` counts chained three-solve sweeps. Sweep ``k`` solves with
    ``Φ_{k-1}`` and records ``max|Φ_k - Φ_{k-1}|``. Once that deviation drops
    to ``tol`` one more sweep is run on the accepted ``Φ``; its triple is
    returned. Non-convergence is reported through ``converged=False``, not
    raised. With ``track_errors`` and a known exact solution,
    ``error_history[k-1]`` holds ``max|U - u*|`` after sweep ``k``.
    """
    grid = spec.grid
    bvals = spec.bc.sampled(grid)
    exact = GridFunction.sample(grid, spec.exact) if spec.exact is not None else None

    t0 = time.perf_counter()
    phi = initial_phi(spec)
    deviations: list[float] = []
    history: list[float] = []
    triple = prev = None
    accepted = converged = False
    for k in range(1, spec.max_iter + 1):
        prev, triple = triple, _chain(spec, phi, bvals)
        if track_errors and exact is not None:
            history.append(max_diff_norm(triple.U, exact))
        new_phi = _evaluate_f(spec, triple.U.values, triple.V.values, triple.W.values)
        deviations.append(max_diff_norm(new_phi, phi, interior=True))
        log.debug("sweep %d: deviation %.3e", k, deviations[-1])
        if accepted:
            converged = True
            break
        accepted = deviations[-1] <= spec.tol
        phi = new_phi
    wall = time.perf_counter() - t0

    report = IterationReport(
        K=len(deviations),
        deviations=deviations,
        d=deviations[0],
        converged=converged,
        error_vs_exact=None if exact is None else max_diff_norm(triple.U, exact),
        u_change=None if prev is None else max_diff_norm(triple.U, prev.U),
        wall_time=wall,
        phi_norm=max_norm(phi),
        error_history=history,
    )
    return triple, report


def a_priori_bounds(q: float, d: float, c_omega: float, k: int) -> tuple[float, float, float]:
    """Iteration part of the total-error bounds for ``(U_k, V_k, W_k)``.

    With ``p_k = q^k / (1 - q)`` returns
    ``(C^3 p_k d, C^2 p_k d, C p_k d)``.
    """
    if not 0 <= q < 1:
        raise ValueError(f"contraction factor must lie in [0, 1), got {q}")
    if d < 0 or c_omega <= 0 or k < 0:
        raise ValueError("need d >= 0, c_omega > 0 and k >= 0")
    p = q**k / (1.0 - q)
    return (c_omega**3 * p * d, c_omega**2 * p * d, c_omega * p * d)

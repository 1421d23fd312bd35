"""Grid convergence studies.

With a known exact solution the error column is ``E(K) = max|U_K - u*|``
and orders come from consecutive errors. Otherwise the error column is the
last change ``max|U_K - U_{K-1}|`` and orders come from differences between
solutions on three nested grids.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from .analysis import floor_threshold, successive_differences
from .grid import Grid2D, make_grid, max_norm
from .triharmonic import ProblemSpec, solve


@dataclass
class StudyRow:
    grid: str
    K: int
    error: float
    order: Optional[float]
    wall_time: float
    floor_reached: bool = False
    order_at_floor: bool = False
    converged: bool = True
    indeterminate: bool = False


@dataclass
class Study:
    mode: str  # "exact" or "successive"
    rows: list[StudyRow]


def check_doubling(sizes: Sequence[int]) -> None:
    for a, b in zip(sizes, sizes[1:]):
        if b != 2 * a:
            raise ValueError(f"grid sizes must double: {a} -> {b}")


def run_study(
    make_spec: Callable[[Grid2D], ProblemSpec],
    sizes: Sequence[int],
    lx: float = 1.0,
    ly: float = 1.0,
) -> Study:
    """Solve on ``n x n`` grids for each ``n`` in ``sizes``, coarse to fine."""
    sizes = sorted(sizes)
    if len(set(sizes)) != len(sizes):
        raise ValueError("duplicate grid sizes")
    specs = [make_spec(make_grid(n, n, lx, ly)) for n in sizes]
    exact_mode = specs[0].exact is not None
    if not exact_mode:
        check_doubling(sizes)
    results = [(spec, *solve(spec)) for spec in specs]
    rows = []
    for spec, triple, report in results:
        err = report.error_vs_exact if exact_mode else report.u_change
        rows.append(
            StudyRow(
                grid=spec.grid.label(),
                K=report.K,
                error=float(err) if err is not None else 0.0,
                order=None,
                wall_time=report.wall_time,
                converged=report.converged,
            )
        )
    # Round-off floor scales with the largest field in the chain, normally Φ.
    scales = [max(r.phi_norm, max_norm(t.U), max_norm(t.V), max_norm(t.W)) for _, t, r in results]

    if exact_mode:
        for i in range(len(rows) - 1):
            e0, e1 = rows[i].error, rows[i + 1].error
            if e0 > 0 and e1 > 0:
                # log2(e0/e1) when the grids double
                rows[i].order = math.log(e0 / e1) / math.log(sizes[i + 1] / sizes[i])
            else:
                rows[i].indeterminate = True
        for row, scale in zip(rows, scales):
            row.floor_reached = bool(row.error <= floor_threshold(scale))
        for i in range(len(rows) - 1):
            rows[i].order_at_floor = rows[i + 1].floor_reached
    else:
        diffs = successive_differences([t.U for _, t, _ in results])
        for i in range(len(rows) - 2):
            d0, d1 = diffs[i], diffs[i + 1]
            if d0 == 0 or d1 == 0:
                rows[i].indeterminate = True
            else:
                rows[i].order = math.log2(d0 / d1)
            rows[i].order_at_floor = bool(d1 <= floor_threshold(scales[i + 2]))
    return Study("exact" if exact_mode else "successive", rows)

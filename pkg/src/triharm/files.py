"""Problem files and CSV exports."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .fparse import CompiledExpr, EvalError, ParseError
from .grid import Grid2D, GridFunction, make_grid
from .study import Study
from .triharmonic import BoundaryData, IterationReport, ProblemSpec, SolutionTriple

FIELD_HEADER = ("x1", "x2", "u", "v", "w")
STUDY_HEADER = ("grid", "K", "error", "order", "time_s")
PROBLEM_KEYS = ("f", "g1", "g2", "g3", "exact", "lx", "ly")


class ProblemFileError(ValueError):
    pass


@dataclass
class ProblemFile:
    f: CompiledExpr
    g1: CompiledExpr | None = None
    g2: CompiledExpr | None = None
    g3: CompiledExpr | None = None
    exact: CompiledExpr | None = None
    lx: float = 1.0
    ly: float = 1.0

    def spec(self, grid: Grid2D, tol: float = 1e-8, max_iter: int = 200, name: str = "") -> ProblemSpec:
        def field_fn(e):
            return None if e is None else e.as_field_function()

        return ProblemSpec(
            grid=grid,
            f=self.f.as_nonlinear_term(),
            bc=BoundaryData(field_fn(self.g1), field_fn(self.g2), field_fn(self.g3)),
            exact=field_fn(self.exact),
            tol=tol,
            max_iter=max_iter,
            name=name,
        )


def parse_problem(text: str, source: str = "<problem>") -> ProblemFile:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    entries: dict[str, tuple[str, int]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ProblemFileError(f"{source}:{lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in PROBLEM_KEYS:
            raise ProblemFileError(f"{source}:{lineno}: unknown key {key!r} (allowed: {', '.join(PROBLEM_KEYS)})")
        if key in entries:
            raise ProblemFileError(f"{source}:{lineno}: duplicate key {key!r}")
        entries[key] = (value, lineno)
    if "f" not in entries:
        raise ProblemFileError(f"{source}: missing required key 'f'")

    out = {}
    for key, (value, lineno) in entries.items():
        if key in ("lx", "ly"):
            try:
                out[key] = float(value)
            except ValueError:
                raise ProblemFileError(f"{source}:{lineno}: {key} must be a number, got {value!r}") from None
            if not out[key] > 0:
                raise ProblemFileError(f"{source}:{lineno}: {key} must be positive")
            continue
        try:
            expr = CompiledExpr(value)
        except ParseError as exc:
            raise ProblemFileError(f"{source}:{lineno}: {exc}") from None
        if key != "f":
            extra = expr.variables - {"x1", "x2"}
            if extra:
                raise ProblemFileError(f"{source}:{lineno}: {key} may only use x1, x2; found {sorted(extra)}")
        out[key] = expr
    return ProblemFile(**out)


def load_problem(path: str | Path) -> ProblemFile:
    path = Path(path)
    return parse_problem(path.read_text(), str(path))


def write_field(path: str | Path, triple: SolutionTriple) -> None:
    """Nodes in row-major ``(i, j)`` order, 17 significant digits."""
    grid = triple.U.grid
    X1, X2 = grid.mesh()
    cols = [X1, X2, triple.U.values, triple.V.values, triple.W.values]
    buf = io.StringIO()
    buf.write(",".join(FIELD_HEADER) + "\n")
    for row in zip(*(c.ravel() for c in cols)):
        buf.write(",".join(format(float(x), ".17g") for x in row) + "\n")
    Path(path).write_text(buf.getvalue())


def read_field(path: str | Path) -> SolutionTriple:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = tuple(next(reader))
        if header != FIELD_HEADER:
            raise ValueError(f"unexpected header {header}")
        data = np.array([[float(x) for x in row] for row in reader])
    x1 = np.unique(data[:, 0])
    x2 = np.unique(data[:, 1])
    grid = make_grid(len(x1) - 1, len(x2) - 1, x1[-1], x2[-1])
    shape = grid.shape
    if data.shape[0] != shape[0] * shape[1]:
        raise ValueError("row count does not match a full grid")
    return SolutionTriple(*(GridFunction(grid, data[:, k].reshape(shape)) for k in (2, 3, 4)))


def write_report(path: str | Path, spec: ProblemSpec, report: IterationReport) -> None:
    doc = {
        "problem": spec.name,
        "grid": [spec.grid.nx, spec.grid.ny],
        "extents": [spec.grid.lx, spec.grid.ly],
        "tol": spec.tol,
        "K": report.K,
        "converged": report.converged,
        "d": report.d,
        "deviations": report.deviations,
        "final_deviation": report.final_deviation,
        "u_change": report.u_change,
        "error_vs_exact": report.error_vs_exact,
        "wall_time": report.wall_time,
    }
    Path(path).write_text(json.dumps(doc, indent=2) + "\n")


def format_study(study: Study) -> str:
    lines = []
    if study.mode == "exact":
        lines.append("# error = E(K) = max|U_K - u_exact|")
    else:
        lines.append("# error = e(K) = max|U_K - U_(K-1)|; order from successive grids")
    lines.append(",".join(STUDY_HEADER))
    for row in study.rows:
        if row.order is not None:
            order = format(row.order, ".6f")
        elif row.indeterminate:
            order = "indeterminate"
        else:
            order = ""
        lines.append(f"{row.grid},{row.K},{row.error:.6e},{order},{row.wall_time:.4f}")
    floors = [r.grid for r in study.rows if r.floor_reached]
    if floors:
        lines.append("# error floor reached: " + " ".join(floors))
    floor_orders = [r.grid for r in study.rows if r.order_at_floor]
    if floor_orders:
        lines.append("# order uses floor-level errors: " + " ".join(floor_orders))
    unconverged = [r.grid for r in study.rows if not r.converged]
    if unconverged:
        lines.append("# not converged: " + " ".join(unconverged))
    return "\n".join(lines) + "\n"

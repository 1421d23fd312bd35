"""Command-line interface.

Exit codes: 0 success / converged, 1 usage or input error, 2 not converged,
3 existence condition not satisfied.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import problems
from .analysis import ExistenceParams, check_theorem, falsify
from .fparse import EvalError
from .files import ProblemFileError, format_study, load_problem, write_field, write_report
from .grid import make_grid
from .study import check_doubling, run_study
from .triharmonic import solve

EXIT_OK, EXIT_USAGE, EXIT_NOT_CONVERGED, EXIT_UNSATISFIED = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_problem_args(p: argparse.ArgumentParser, required: bool = True) -> None:
    g = p.add_mutually_exclusive_group(required=required)
    g.add_argument("--example", type=int, choices=problems.EXAMPLES, help="built-in example")
    g.add_argument("--problem", type=Path, help="problem file (key = value lines)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="triharm", description="Nonlinear triharmonic solver on rectangles.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("solve", help="solve one problem on one grid")
    _add_problem_args(s)
    s.add_argument("--grid", type=int, nargs="+", metavar="N", default=[64], help="NX [NY]")
    s.add_argument("--tol", type=float, default=1e-8)
    s.add_argument("--max-iter", type=int, default=200)
    s.add_argument("--out-field", type=Path)
    s.add_argument("--out-report", type=Path)

    st = sub.add_parser("study", help="grid convergence study")
    _add_problem_args(st)
    st.add_argument("--grids", default="16,32,64,128", help="comma-separated grid sizes")
    st.add_argument("--tol", type=float, default=1e-8)
    st.add_argument("--max-iter", type=int, default=200)
    st.add_argument("--out", type=Path)

    c = sub.add_parser("check", help="check the existence and uniqueness condition")
    c.add_argument("--M", type=float)
    c.add_argument("--L1", type=float)
    c.add_argument("--L2", type=float)
    c.add_argument("--L3", type=float)
    c.add_argument("--c-omega", type=float, default=0.125)
    c.add_argument("--positivity", action="store_true")
    c.add_argument("--falsify", action="store_true", help="sample f over the box looking for violations")
    _add_problem_args(c, required=False)
    return parser


def _problem_factory(args):
    """Return ``(make_spec(grid, tol, max_iter), lx, ly)``."""
    if args.example is not None:
        return (lambda grid, tol, it: problems.example(args.example, grid, tol, it)), 1.0, 1.0
    pf = load_problem(args.problem)
    name = args.problem.stem
    return (lambda grid, tol, it: pf.spec(grid, tol, it, name)), pf.lx, pf.ly


def cmd_solve(args) -> int:
    if len(args.grid) > 2:
        raise UsageError("--grid takes NX or NX NY")
    make_spec, lx, ly = _problem_factory(args)
    nx = args.grid[0]
    ny = args.grid[1] if len(args.grid) == 2 else nx
    try:
        grid = make_grid(nx, ny, lx, ly)
        spec = make_spec(grid, args.tol, args.max_iter)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    triple, report = solve(spec)

    if args.out_field:
        write_field(args.out_field, triple)
    if args.out_report:
        write_report(args.out_report, spec, report)

    status = "converged" if report.converged else "NOT converged"
    print(f"{spec.name or 'problem'} on {grid.label()}: {status}, K = {report.K}")
    print(f"final deviation max|Phi_K - Phi_(K-1)| = {report.final_deviation:.4e}")
    if report.u_change is not None:
        print(f"max|U_K - U_(K-1)| = {report.u_change:.4e}")
    if report.error_vs_exact is not None:
        print(f"E(K) = max|U_K - u_exact| = {report.error_vs_exact:.4e}")
    return EXIT_OK if report.converged else EXIT_NOT_CONVERGED


def cmd_study(args) -> int:
    try:
        sizes = [int(s) for s in args.grids.split(",") if s.strip()]
    except ValueError:
        raise UsageError(f"bad --grids {args.grids!r}") from None
    if len(sizes) < 2:
        raise UsageError("a study needs at least two grids")
    make_spec, lx, ly = _problem_factory(args)
    try:
        probe = make_spec(make_grid(sizes[0], sizes[0], lx, ly), args.tol, args.max_iter)
        if probe.exact is None:
            check_doubling(sorted(sizes))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    study = run_study(lambda g: make_spec(g, args.tol, args.max_iter), sizes, lx, ly)
    text = format_study(study)
    if args.out:
        args.out.write_text(text)
    sys.stdout.write(text)
    return EXIT_OK if all(r.converged for r in study.rows) else EXIT_NOT_CONVERGED


_EXAMPLE_CONSTANTS = problems.EXISTENCE_CONSTANTS


def cmd_check(args) -> int:
    if args.falsify and args.example is None and args.problem is None:
        raise UsageError("--falsify needs --problem or --example")
    consts = dict(_EXAMPLE_CONSTANTS.get(args.example, {})) if args.example is not None else {}
    for key in ("M", "L1", "L2", "L3"):
        if getattr(args, key) is not None:
            consts[key] = getattr(args, key)
    missing = [k for k in ("M", "L1", "L2", "L3") if k not in consts]
    if missing:
        raise UsageError("missing constants: " + ", ".join("--" + k for k in missing))
    positivity = args.positivity or consts.pop("positivity_mode", False)
    try:
        params = ExistenceParams(c_omega=args.c_omega, positivity_mode=positivity, **consts)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    report = check_theorem(params)
    print(report.summary())
    if args.falsify:
        make_spec, lx, ly = _problem_factory(args)
        f = make_spec(make_grid(2, 2, lx, ly), 1.0, 1).f
        print(falsify(f, params, lx=lx, ly=ly).summary())
    return EXIT_OK if report.satisfied else EXIT_UNSATISFIED


COMMANDS = {"solve": cmd_solve, "study": cmd_study, "check": cmd_check}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (UsageError, ProblemFileError, EvalError, FloatingPointError, OSError) as exc:
        print(f"triharm {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

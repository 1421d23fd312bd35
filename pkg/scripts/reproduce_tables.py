"""Convergence studies for the five built-in examples.

Usage: python scripts/reproduce_tables.py [--out DIR] [--max-grid N]
Writes one CSV per study and echoes them to stdout.
"""

import argparse
from pathlib import Path

from triharm import problems
from triharm.files import format_study
from triharm.study import run_study

# (example, tol, grids)
STUDIES = [
    (1, 1e-6, [16, 32, 64, 128, 256]),
    (1, 1e-8, [16, 32, 64, 128]),
    (2, 1e-8, [16, 32, 64, 128, 256]),
    (3, 1e-8, [16, 32, 64, 128, 256]),
    (4, 1e-6, [16, 32, 64, 128]),
    (4, 1e-8, [16, 32, 64, 128]),
    (5, 1e-6, [16, 32, 64, 128]),
]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=Path("results"))
    ap.add_argument("--max-grid", type=int, default=256)
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)

    for number, tol, grids in STUDIES:
        grids = [n for n in grids if n <= args.max_grid]
        study = run_study(lambda g: problems.example(number, g, tol=tol), grids)
        text = format_study(study)
        name = f"example{number}_tol{tol:.0e}.csv"
        (args.out / name).write_text(text)
        print(f"## example {number}, TOL = {tol:g}")
        print(text)


if __name__ == "__main__":
    main()

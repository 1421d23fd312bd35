"""Compare the measured iteration error of Example 1 with the a priori bound.

Prints, per sweep k, the deviation of Φ, the error of U against the exact
solution and the bound C^3 q^(k-1)/(1-q) d plus the discretization floor.
"""

import argparse

from triharm import problems
from triharm.analysis import ExistenceParams, contraction_q
from triharm.grid import make_grid
from triharm.triharmonic import a_priori_bounds, solve


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--grid", type=int, default=128)
    ap.add_argument("--tol", type=float, default=1e-10)
    args = ap.parse_args()

    grid = make_grid(args.grid)
    q = contraction_q(ExistenceParams(**problems.EXISTENCE_CONSTANTS[1]))
    _, rep = solve(problems.example(1, grid, tol=args.tol), track_errors=True)
    _, tight = solve(problems.example(1, grid, tol=1e-13))
    floor = tight.error_vs_exact

    print(f"q = {q:.6f}, d = {rep.d:.6e}, floor = {floor:.3e}")
    print("k,deviation,error,bound")
    for k, (dev, err) in enumerate(zip(rep.deviations, rep.error_history), start=1):
        bound = a_priori_bounds(q, rep.d, 0.125, k - 1)[0] + floor
        print(f"{k},{dev:.4e},{err:.4e},{bound:.4e}")


if __name__ == "__main__":
    main()

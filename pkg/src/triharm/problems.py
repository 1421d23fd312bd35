"""Built-in test problems on the unit square.

The closed forms are hand-coded. ``EXPRESSIONS`` holds the same problems as
parser input and is used only to cross-check the parser.
"""

from __future__ import annotations

import numpy as np

from .grid import Grid2D
from .triharmonic import BoundaryData, ProblemSpec

PI = np.pi


def _ss(x1, x2):
    return np.sin(PI * x1) * np.sin(PI * x2)


# Example 1: u* = sin(πx1)sin(πx2) / (8π²), homogeneous data.
def ex1_exact(x1, x2):
    return _ss(x1, x2) / (8 * PI**2)


def ex1_bilap_exact(x1, x2):
    return PI**2 / 2 * _ss(x1, x2)


def ex1_f(x1, x2, u, v, w):
    return -(PI**4) * _ss(x1, x2) + v**2 - u * w + np.sin(w - ex1_bilap_exact(x1, x2))


def ex2_f(x1, x2, u, v, w):
    return -_ss(x1, x2) + u * v - 0.5 * w


def ex3_f(x1, x2, u, v, w):
    return -100.0 + 50.0 * u**2 - v**3 + w**2


def _es(x1, x2):
    return np.exp(x1 + x2)


def ex4_f(x1, x2, u, v, w):
    e = _es(x1, x2)
    return 4 * e + np.sin(e - u) - np.cos(2 * e - v) + w + 1.0


def ex4_g2(x1, x2):
    return 2 * _es(x1, x2)


def ex4_g3(x1, x2):
    return 4 * _es(x1, x2)


def _gauss(x1, x2):
    return np.exp(-(x1**2 + x2**2))


def ex5_f(x1, x2, u, v, w):
    return 8 * _gauss(x1, x2) + np.sin(u) + 1.0 / (1.0 + v**2) + np.exp(-w)


def ex5_g1(x1, x2):
    return np.sin(x1 * (1 - x1) * x2 * (1 - x2))


def ex5_g3(x1, x2):
    return np.cos(x1 * x2)


_BUILDERS = {
    1: lambda: dict(f=ex1_f, exact=ex1_exact),
    2: lambda: dict(f=ex2_f),
    3: lambda: dict(f=ex3_f),
    4: lambda: dict(f=ex4_f, bc=BoundaryData(_es, ex4_g2, ex4_g3), exact=_es),
    5: lambda: dict(f=ex5_f, bc=BoundaryData(ex5_g1, _gauss, ex5_g3)),
}

EXAMPLES = tuple(sorted(_BUILDERS))


def example(number: int, grid: Grid2D, tol: float = 1e-8, max_iter: int = 200) -> ProblemSpec:
    try:
        kwargs = _BUILDERS[number]()
    except KeyError:
        raise ValueError(f"no built-in example {number}; choose from {EXAMPLES}") from None
    return ProblemSpec(grid=grid, tol=tol, max_iter=max_iter, name=f"example{number}", **kwargs)


EXPRESSIONS = {
    1: {
        "f": "-pi^4*sin(pi*x1)*sin(pi*x2) + v^2 - u*w + sin(w - pi^2/2*sin(pi*x1)*sin(pi*x2))",
        "exact": "sin(pi*x1)*sin(pi*x2)/(8*pi^2)",
    },
    2: {"f": "-sin(pi*x1)*sin(pi*x2) + u*v - 0.5*w"},
    3: {"f": "-100 + 50*u^2 - v^3 + w^2"},
    4: {
        "f": "4*exp(x1+x2) + sin(exp(x1+x2) - u) - cos(2*exp(x1+x2) - v) + w + 1",
        "g1": "exp(x1+x2)",
        "g2": "2*exp(x1+x2)",
        "g3": "4*exp(x1+x2)",
        "exact": "exp(x1+x2)",
    },
    5: {
        "f": "8*exp(-(x1^2+x2^2)) + sin(u) + 1/(1+v^2) + exp(-w)",
        "g1": "sin(x1*(1-x1)*x2*(1-x2))",
        "g2": "exp(-(x1^2+x2^2))",
        "g3": "cos(x1*x2)",
    },
}


# Constants for the existence check on the unit square (C = 1/8).
# Example 1: L1 = sup|w| = M/8, L2 = sup|2v| = 2M/64, L3 = sup|u| + 1 = M/512 + 1.
# Example 2, positive box: L1 = sup|v| = M/64, L2 = sup|u| = M/512, L3 = 1/2.
EXISTENCE_CONSTANTS = {
    1: dict(M=104.0, L1=13.0, L2=3.25, L3=1.2031),
    2: dict(M=1.5, L1=1.5 / 64, L2=1.5 / 512, L3=0.5, positivity_mode=True),
}


def example3_sup_f(M: float, c: float = 0.125) -> float:
    """Bound on ``|f|`` for Example 3 over the box of size ``M``."""
    return 100.0 + 50.0 * (c**3 * M) ** 2 + (c**2 * M) ** 3 + (c * M) ** 2

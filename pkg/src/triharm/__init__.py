"""Fourth-order fixed-point solver for nonlinear triharmonic problems on rectangles."""

from .analysis import (
    ExistenceParams,
    ExistenceReport,
    c_omega,
    c_omega_unit_square,
    check_theorem,
    contraction_q,
    falsify,
    feasible_m,
    observed_order_exact,
    observed_order_successive,
)
from .fparse import CompiledExpr, evaluate, parse, to_string
from .grid import Grid2D, GridFunction, make_grid, max_diff_norm, max_norm, sample_coincident
from .poisson import DirichletProblem, residual, solve_compact, solve_dense_oracle
from .study import StudyRow, run_study
from .triharmonic import (
    BoundaryData,
    IterationReport,
    ProblemSpec,
    SolutionTriple,
    a_priori_bounds,
    initial_phi,
    solve,
    sweep,
)

__version__ = "0.1.0"

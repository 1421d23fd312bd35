"""Existence conditions, contraction factor and observed convergence orders."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from .grid import GridFunction, max_diff_norm, sample_coincident

EPS = np.finfo(float).eps
FLOOR_FACTOR = 100.0


def c_omega(n: int, radius: float) -> float:
    """Maximum-principle constant ``R^n / (2n)`` for a domain inside a ball of radius ``R``."""
    if n < 2:
        raise ValueError(f"dimension must be >= 2, got {n}")
    if not radius > 0:
        raise ValueError(f"radius must be positive, got {radius}")
    return radius**n / (2.0 * n)


def c_omega_unit_square() -> float:
    # Circumscribed circle has R = sqrt(2)/2, so R^2/4 = 1/8 (exact, unlike the float sqrt).
    return 0.125


@dataclass(frozen=True)
class ExistenceParams:
    M: float
    L1: float = 0.0
    L2: float = 0.0
    L3: float = 0.0
    c_omega: float = 0.125
    positivity_mode: bool = False

    def __post_init__(self):
        if not self.M > 0:
            raise ValueError(f"M must be positive, got {self.M}")
        if min(self.L1, self.L2, self.L3) < 0:
            raise ValueError("Lipschitz constants must be nonnegative")
        if not self.c_omega > 0:
            raise ValueError("c_omega must be positive")

    def box(self) -> tuple[tuple[float, float], tuple[float, float], tuple[float, float]]:
        """Ranges of ``(u, v, w)`` on which the hypotheses on ``f`` must hold."""
        c, M = self.c_omega, self.M
        bu, bv, bw = c**3 * M, c**2 * M, c * M
        if self.positivity_mode:
            return (0.0, bu), (-bv, 0.0), (0.0, bw)
        return (-bu, bu), (-bv, bv), (-bw, bw)


@dataclass
class ExistenceReport:
    q: float
    satisfied: bool
    solution_bounds: tuple[float, float, float]
    positivity: Optional[bool] = None
    notes: list[str] = field(default_factory=list)

    def summary(self) -> str:
        bu, bv, bw = self.solution_bounds
        lines = [
            f"q = {self.q:.6g}",
            f"condition q < 1: {'satisfied' if self.satisfied else 'NOT satisfied'}",
        ]
        if self.positivity:
            lines.append(f"0 <= u <= {bu:.6g}, -{bv:.6g} <= lap u <= 0, 0 <= lap^2 u <= {bw:.6g}")
        else:
            lines.append(f"|u| <= {bu:.6g}, |lap u| <= {bv:.6g}, |lap^2 u| <= {bw:.6g}")
        lines.extend(self.notes)
        return "\n".join(lines)


def contraction_q(p: ExistenceParams) -> float:
    c = p.c_omega
    return (c**2 * p.L1 + c * p.L2 + p.L3) * c


def check_theorem(p: ExistenceParams) -> ExistenceReport:
    """Check the numeric part of the existence and uniqueness conditions.

    The bound ``|f| <= M`` (or ``-M <= f <= 0``) and the Lipschitz estimate
    on the box are taken as given; use :func:`falsify` to probe them.
    """
    q = contraction_q(p)
    c, M = p.c_omega, p.M
    report = ExistenceReport(
        q=q,
        satisfied=q < 1,
        solution_bounds=(c**3 * M, c**2 * M, c * M),
        positivity=(q < 1) if p.positivity_mode else None,
    )
    hyp = "-M <= f <= 0" if p.positivity_mode else "|f| <= M"
    report.notes.append(f"assumed, not verified: {hyp} and the Lipschitz estimate on the box")
    return report


def feasible_m(sup_f: Callable[[float], float], candidates: Iterable[float]) -> list[float]:
    """Candidates ``M`` with ``sup_f(M) <= M``, where ``sup_f(M)`` bounds ``|f|`` on the box for ``M``."""
    return [float(M) for M in candidates if sup_f(float(M)) <= M]


@dataclass
class FalsifierReport:
    max_abs_f: float
    min_f: float
    max_f: float
    bound_violations: int
    lipschitz_violations: int
    samples: int

    @property
    def refuted(self) -> bool:
        return self.bound_violations > 0 or self.lipschitz_violations > 0

    def summary(self) -> str:
        verdict = "REFUTED" if self.refuted else "no violation found (sampling cannot prove the hypotheses)"
        return (
            f"sampled {self.samples} points: max|f| = {self.max_abs_f:.6g}, "
            f"f in [{self.min_f:.6g}, {self.max_f:.6g}]; "
            f"bound violations {self.bound_violations}, Lipschitz violations {self.lipschitz_violations}: {verdict}"
        )


def falsify(
    f: Callable,
    p: ExistenceParams,
    nx: int = 9,
    nu: int = 7,
    pairs: int = 20000,
    lx: float = 1.0,
    ly: float = 1.0,
    seed: int = 0,
) -> FalsifierReport:
    """Evaluate ``f`` on a lattice over the box and look for counterexamples."""
    (u0, u1), (v0, v1), (w0, w1) = p.box()
    xs = np.linspace(0.0, lx, nx)
    ys = np.linspace(0.0, ly, nx)
    X1, X2, U, V, W = np.meshgrid(
        xs, ys, np.linspace(u0, u1, nu), np.linspace(v0, v1, nu), np.linspace(w0, w1, nu), indexing="ij"
    )
    F = np.broadcast_to(np.asarray(f(X1, X2, U, V, W), dtype=float), X1.shape)
    tol = 1e-12 * max(1.0, p.M)
    if p.positivity_mode:
        bound_bad = int(np.count_nonzero((F < -p.M - tol) | (F > tol)))
    else:
        bound_bad = int(np.count_nonzero(np.abs(F) > p.M + tol))

    # Lipschitz pairs share the same x.
    rng = np.random.default_rng(seed)
    flat = F.reshape(nx * nx, -1)
    Uf, Vf, Wf = (a.reshape(nx * nx, -1) for a in (U, V, W))
    ix = rng.integers(0, nx * nx, pairs)
    a = rng.integers(0, flat.shape[1], pairs)
    b = rng.integers(0, flat.shape[1], pairs)
    lhs = np.abs(flat[ix, a] - flat[ix, b])
    rhs = p.L1 * np.abs(Uf[ix, a] - Uf[ix, b]) + p.L2 * np.abs(Vf[ix, a] - Vf[ix, b]) + p.L3 * np.abs(Wf[ix, a] - Wf[ix, b])
    lip_bad = int(np.count_nonzero(lhs > rhs + tol))
    return FalsifierReport(
        max_abs_f=float(np.abs(F).max()),
        min_f=float(F.min()),
        max_f=float(F.max()),
        bound_violations=bound_bad,
        lipschitz_violations=lip_bad,
        samples=F.size,
    )


def floor_threshold(scale: float) -> float:
    """Errors below this are dominated by round-off for data of size ``scale``."""
    return FLOOR_FACTOR * EPS * scale


def observed_order_exact(errors: Sequence[tuple[float, float]]) -> list[float]:
    """``log2(E(h) / E(h/2))`` for consecutive ``(h, E)`` pairs."""
    hs = [h for h, _ in errors]
    es = [e for _, e in errors]
    if any(not e > 0 for e in es):
        raise ValueError("errors must be positive")
    for h0, h1 in zip(hs, hs[1:]):
        if not math.isclose(h0, 2.0 * h1, rel_tol=1e-12):
            raise ValueError(f"grid spacings must halve: {h0} -> {h1}")
    return [math.log2(e0 / e1) for e0, e1 in zip(es, es[1:])]


def successive_differences(fields: Sequence[GridFunction]) -> list[float]:
    """``max|U^h - U^{h/2}|`` on the coarse grid's nodes, for consecutive fields."""
    return [max_diff_norm(a, sample_coincident(b, a.grid)) for a, b in zip(fields, fields[1:])]


def observed_order_successive(fields: Sequence[GridFunction]) -> Optional[float]:
    """Order from three nested solutions without an exact one.

    Returns ``None`` when either difference vanishes (indeterminate).
    """
    if len(fields) != 3:
        raise ValueError("need solutions on three nested grids")
    d0, d1 = successive_differences(fields)
    if d0 == 0 or d1 == 0:
        return None
    return math.log2(d0 / d1)

"""Dense two-phase simplex for the small LPs the weight model produces.

Entering and leaving variables follow Bland's rule, so the solver cannot
cycle and always returns the same vertex for the same problem. The pivot
loop itself lives in :mod:`cloudgdm.kernels`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import kernels
from .errors import InfeasibleError, InvalidArgumentError, LPError, UnboundedError

TOL = 1e-9

LE = "<="
GE = ">="
EQ = "="
_RELATIONS = (LE, GE, EQ)


@dataclass(frozen=True)
class Constraint:
    coefficients: tuple[float, ...]
    relation: str
    rhs: float

    def __post_init__(self):
        if self.relation not in _RELATIONS:
            raise InvalidArgumentError(f"relation must be one of {_RELATIONS}, got {self.relation!r}")


@dataclass(frozen=True)
class Bound:
    lower: float = 0.0
    upper: float = math.inf


@dataclass(frozen=True)
class LpProblem:
    """Minimise ``objective @ x`` subject to ``constraints`` and ``variable_bounds``."""

    objective: tuple[float, ...]
    constraints: tuple[Constraint, ...]
    variable_bounds: tuple[Bound, ...] = field(default=())

    def __post_init__(self):
        n = len(self.objective)
        if not self.variable_bounds:
            object.__setattr__(self, "variable_bounds", tuple(Bound() for _ in range(n)))
        if len(self.variable_bounds) != n:
            raise InvalidArgumentError("one bound per variable required")
        if not self.constraints:
            raise InvalidArgumentError("an LP needs at least one constraint")
        for k, con in enumerate(self.constraints):
            if len(con.coefficients) != n:
                raise InvalidArgumentError(f"constraint {k} has {len(con.coefficients)} coefficients, expected {n}")
        for b in self.variable_bounds:
            if b.lower > b.upper:
                raise InvalidArgumentError(f"empty variable bound [{b.lower}, {b.upper}]")

    @property
    def n_variables(self) -> int:
        return len(self.objective)


@dataclass(frozen=True)
class LpSolution:
    values: tuple[float, ...]
    objective: float


def _standardize(problem: LpProblem):
    """Rewrite to ``min c @ y, A y (rel) b, y >= 0``.

    Returns the pieces plus a recovery map ``x = offset + T @ y``.
    """
    n = problem.n_variables
    cols = []  # (original index, sign)
    offset = np.zeros(n)
    extra_rows = []  # (col index, upper bound) for y <= u
    for j, b in enumerate(problem.variable_bounds):
        if math.isfinite(b.lower):
            offset[j] = b.lower
            cols.append((j, 1.0))
            if math.isfinite(b.upper):
                extra_rows.append((len(cols) - 1, b.upper - b.lower))
        elif math.isfinite(b.upper):
            offset[j] = b.upper
            cols.append((j, -1.0))
        else:
            cols.append((j, 1.0))
            cols.append((j, -1.0))
    T = np.zeros((n, len(cols)))
    for k, (j, sign) in enumerate(cols):
        T[j, k] = sign
    A_orig = np.array([con.coefficients for con in problem.constraints], dtype=np.float64)
    b_orig = np.array([con.rhs for con in problem.constraints], dtype=np.float64)
    A = A_orig @ T
    b = b_orig - A_orig @ offset
    rel = [con.relation for con in problem.constraints]
    for k, u in extra_rows:
        row = np.zeros(len(cols))
        row[k] = 1.0
        A = np.vstack([A, row])
        b = np.append(b, u)
        rel.append(LE)
    c = np.asarray(problem.objective, dtype=np.float64) @ T
    return c, A, b, rel, T, offset


def solve_lp(problem: LpProblem, *, max_iter: int | None = None) -> LpSolution:
    c, A, b, rel, T_map, offset = _standardize(problem)
    m, n = A.shape
    rel = list(rel)
    for i in range(m):
        # rhs >= 0; zero-rhs ">=" rows become "<=" rows so they need no artificial
        if b[i] < 0 or (b[i] == 0 and rel[i] == GE):
            A[i] = -A[i]
            b[i] = -b[i]
            rel[i] = {LE: GE, GE: LE, EQ: EQ}[rel[i]]
    n_slack = sum(1 for r in rel if r != EQ)
    art_rows = [i for i in range(m) if rel[i] != LE]
    n_art = len(art_rows)
    width = n + n_slack + n_art
    tab = np.zeros((m + 1, width + 1))
    tab[:m, :n] = A
    tab[:m, -1] = b
    basis = np.zeros(m, dtype=np.intp)
    s = n
    a = n + n_slack
    for i in range(m):
        if rel[i] == LE:
            tab[i, s] = 1.0
            basis[i] = s
            s += 1
        elif rel[i] == GE:
            tab[i, s] = -1.0
            s += 1
            tab[i, a] = 1.0
            basis[i] = a
            a += 1
        else:
            tab[i, a] = 1.0
            basis[i] = a
            a += 1
    if max_iter is None:
        max_iter = 50 * (m + width) + 100
    scale = max(1.0, float(np.max(np.abs(b))) if m else 1.0)

    if n_art:
        # phase I: minimise the sum of artificials
        for i in art_rows:
            tab[m] -= tab[i]
        tab[m, n + n_slack:width] = 0.0
        status = kernels.simplex_iterate(tab, basis, n + n_slack, TOL, max_iter)
        if status == kernels.ITERATION_LIMIT:
            raise LPError("phase I hit the iteration limit")
        if -tab[m, -1] > 1e-9 * scale:
            raise InfeasibleError(f"LP is infeasible (phase I residual {-tab[m, -1]:.3g})")
        keep = np.ones(m, dtype=bool)
        for i in range(m):
            if basis[i] >= n + n_slack:
                nonzero = np.flatnonzero(np.abs(tab[i, : n + n_slack]) > TOL)
                if nonzero.size:
                    kernels.pivot(tab, i, int(nonzero[0]))
                    basis[i] = int(nonzero[0])
                else:
                    keep[i] = False  # redundant row
        rows = np.append(np.flatnonzero(keep), m)
        tab = np.ascontiguousarray(np.delete(tab[rows], np.s_[n + n_slack:width], axis=1))
        basis = np.ascontiguousarray(basis[keep])
        m = tab.shape[0] - 1
        width = n + n_slack

    cost = np.zeros(width)
    cost[:n] = c
    tab[m, :width] = cost
    tab[m, -1] = 0.0
    for i in range(m):
        if cost[basis[i]] != 0.0:
            tab[m] -= cost[basis[i]] * tab[i]
    status = kernels.simplex_iterate(tab, basis, width, TOL, max_iter)
    if status == kernels.UNBOUNDED:
        raise UnboundedError("LP objective is unbounded below")
    if status == kernels.ITERATION_LIMIT:
        raise LPError("phase II hit the iteration limit")

    y = np.zeros(width)
    for i in range(m):
        y[basis[i]] = tab[i, -1]
    x = offset + T_map @ y[:n]
    objective = float(np.dot(problem.objective, x))
    return LpSolution(tuple(float(v) for v in x), objective)


def lp_from_arrays(
    objective: Sequence[float],
    rows: Sequence[Sequence[float]],
    relations: Sequence[str],
    rhs: Sequence[float],
    bounds: Sequence[tuple[float, float]] | None = None,
) -> LpProblem:
    """Convenience constructor from plain arrays."""
    cons = tuple(Constraint(tuple(float(v) for v in r), rel, float(b)) for r, rel, b in zip(rows, relations, rhs))
    bnds = tuple(Bound(lo, hi) for lo, hi in bounds) if bounds is not None else ()
    return LpProblem(tuple(float(v) for v in objective), cons, bnds)

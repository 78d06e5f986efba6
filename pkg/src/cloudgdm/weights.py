"""Criteria weights that balance weighted hyper-entropy across criteria.

The min-max model ``min max |He[i, j] w[j] - He[i, j0] w[j0]|`` over the
simplex of weights is linearised with an auxiliary bound ``xi`` and solved
with :func:`cloudgdm.lp.solve_lp`.
"""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError
from .lp import EQ, GE, LE, Bound, Constraint, LpProblem, solve_lp


@dataclass(frozen=True)
class ReferencePolicy:
    """Which criterion pairs are balanced.

    ``reference is None`` balances every unordered pair (the default);
    otherwise only pairs ``(j, reference)`` are balanced.
    """

    reference: int | None = None

    @classmethod
    def all_pairs(cls) -> "ReferencePolicy":
        return cls(None)

    @classmethod
    def fixed(cls, reference: int) -> "ReferencePolicy":
        return cls(int(reference))

    def describe(self) -> str:
        return "all-pairs" if self.reference is None else f"fixed({self.reference})"

    def pairs(self, m: int) -> list[tuple[int, int]]:
        if self.reference is None:
            return list(itertools.combinations(range(m), 2))
        if not 0 <= self.reference < m:
            raise InvalidArgumentError(f"reference criterion {self.reference} out of range for {m} criteria")
        return [(j, self.reference) for j in range(m) if j != self.reference]


@dataclass(frozen=True)
class WeightSolution:
    weights: tuple[float, ...]
    xi: float
    policy: ReferencePolicy = ReferencePolicy()


def _check_he(he) -> np.ndarray:
    he = np.asarray(he, dtype=np.float64)
    if he.ndim != 2 or he.shape[0] < 1:
        raise InvalidArgumentError("hyper-entropy matrix must be 2-D with at least one row")
    if he.shape[1] < 2:
        raise InvalidArgumentError("weight derivation needs at least two criteria")
    if not np.all(np.isfinite(he)):
        raise InvalidArgumentError("hyper-entropy values must be finite")
    if np.any(he < 0):
        raise InvalidArgumentError("hyper-entropy values must be non-negative")
    return he


def build_weight_lp(he, policy: ReferencePolicy = ReferencePolicy()) -> LpProblem:
    """Variables are ``(w_1, ..., w_M, xi)``; objective is ``min xi``."""
    he = _check_he(he)
    n, m = he.shape
    constraints = []
    for i in range(n):
        for j, k in policy.pairs(m):
            row = [0.0] * (m + 1)
            row[j] = he[i, j]
            row[k] = -he[i, k]
            upper = list(row)
            upper[m] = -1.0
            lower = list(row)
            lower[m] = 1.0
            constraints.append(Constraint(tuple(upper), LE, 0.0))
            constraints.append(Constraint(tuple(lower), GE, 0.0))
    constraints.append(Constraint(tuple([1.0] * m + [0.0]), EQ, 1.0))
    objective = tuple([0.0] * m + [1.0])
    return LpProblem(objective, tuple(constraints), tuple(Bound(0.0, math.inf) for _ in range(m + 1)))


def derive_weights(he, policy: ReferencePolicy = ReferencePolicy()) -> WeightSolution:
    he = _check_he(he)
    m = he.shape[1]
    zero_cols = np.flatnonzero(np.all(he == 0.0, axis=0))
    if zero_cols.size:
        # every split over all-zero columns attains xi = 0; share it evenly
        if zero_cols.size < m:
            warnings.warn(
                f"criteria {zero_cols.tolist()} have zero hyper-entropy everywhere; "
                "all weight goes to them",
                RuntimeWarning,
                stacklevel=2,
            )
        w = np.zeros(m)
        w[zero_cols] = 1.0 / zero_cols.size
        return WeightSolution(tuple(w.tolist()), 0.0, policy)
    sol = solve_lp(build_weight_lp(he, policy))
    w = np.asarray(sol.values[:m])
    w[np.abs(w) < 1e-15] = 0.0
    w = np.clip(w, 0.0, None)
    w = w / w.sum()
    xi = max(0.0, float(sol.values[m]))
    return WeightSolution(tuple(w.tolist()), xi, policy)


def balance_objective(he, weights, policy: ReferencePolicy = ReferencePolicy()) -> float:
    """Largest weighted He imbalance ``|He[i,j] w[j] - He[i,k] w[k]|`` over the policy's pairs."""
    he = _check_he(he)
    w = np.asarray(weights, dtype=np.float64)
    worst = 0.0
    for j, k in policy.pairs(he.shape[1]):
        worst = max(worst, float(np.max(np.abs(he[:, j] * w[j] - he[:, k] * w[k]))))
    return worst

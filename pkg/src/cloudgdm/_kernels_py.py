"""Pure-Python (numpy) implementations of the hot kernels.

Each function here has a twin in ``_kernels.pyx`` with the same signature
and the same floating-point operation order, so both backends return the
same values for the simplex and sweep kernels. ``certainty`` may differ in
the last ulp because the two backends use different ``exp`` routines.
"""

from __future__ import annotations

import numpy as np

OPTIMAL = 0
UNBOUNDED = 1
ITERATION_LIMIT = 2


def certainty(x, ex: float, en_prime):
    """Certainty degree of each drop ``x[k]`` given its sampled entropy ``en_prime[k]``."""
    x = np.asarray(x, dtype=np.float64)
    en_prime = np.asarray(en_prime, dtype=np.float64)
    dx = x - ex
    out = np.empty_like(x)
    zero = en_prime == 0.0
    nz = ~zero
    out[nz] = np.exp(-(dx[nz] * dx[nz]) / (2.0 * en_prime[nz] * en_prime[nz]))
    out[zero] = np.where(dx[zero] == 0.0, 1.0, 0.0)
    return out


def iaa_sweep(lowers, uppers):
    """Sweep sorted interval endpoints and return ``(breakpoints, counts)``.

    ``counts[i]`` is the number of half-open intervals covering
    ``[breakpoints[i], breakpoints[i + 1])``. Lower endpoints sort before
    upper endpoints at equal values. Breakpoints are strictly increasing and
    the last count is always zero.
    """
    lowers = np.asarray(lowers, dtype=np.float64)
    uppers = np.asarray(uppers, dtype=np.float64)
    n = lowers.shape[0]
    values = np.concatenate([lowers, uppers])
    # kind 0 = lower (+1), kind 1 = upper (-1)
    kinds = np.concatenate([np.zeros(n, dtype=np.int64), np.ones(n, dtype=np.int64)])
    order = np.lexsort((kinds, values))
    values = values[order]
    steps = 1 - 2 * kinds[order]
    counts = np.cumsum(steps)
    last = np.ones(2 * n, dtype=bool)
    last[:-1] = values[1:] != values[:-1]
    return values[last].copy(), counts[last].astype(np.int64)


def simplex_iterate(T, basis, n_cols: int, tol: float, max_iter: int) -> int:
    """Run Bland's-rule simplex pivots on tableau ``T`` in place.

    ``T`` has ``m`` constraint rows followed by one reduced-cost row; the last
    column is the right-hand side. Only the first ``n_cols`` columns may
    enter the basis. Returns OPTIMAL, UNBOUNDED or ITERATION_LIMIT.
    """
    m = T.shape[0] - 1
    last = T.shape[1] - 1
    for _ in range(max_iter):
        neg = np.flatnonzero(T[m, :n_cols] < -tol)
        if neg.size == 0:
            return OPTIMAL
        col = int(neg[0])
        column = T[:m, col]
        eligible = np.flatnonzero(column > tol)
        if eligible.size == 0:
            return UNBOUNDED
        ratios = T[eligible, last] / column[eligible]
        best = ratios.min()
        ties = eligible[ratios <= best + tol]
        row = int(ties[np.argmin(basis[ties])])
        pivot(T, row, col)
        basis[row] = col
    return ITERATION_LIMIT


def pivot(T, row: int, col: int) -> None:
    T[row, :] /= T[row, col]
    factors = T[:, col].copy()
    factors[row] = 0.0
    T -= factors[:, None] * T[row][None, :]

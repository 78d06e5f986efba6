# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels. Mirrors ``_kernels_py`` function for function."""

import numpy as np
cimport numpy as cnp
from libc.math cimport exp
from libc.stdlib cimport qsort

cnp.import_array()

cdef enum:
    _OPTIMAL = 0
    _UNBOUNDED = 1
    _ITERATION_LIMIT = 2

OPTIMAL = _OPTIMAL
UNBOUNDED = _UNBOUNDED
ITERATION_LIMIT = _ITERATION_LIMIT


ctypedef struct _Event:
    double value
    int kind


cdef int _event_cmp(const void* a, const void* b) noexcept nogil:
    cdef const _Event* ea = <const _Event*> a
    cdef const _Event* eb = <const _Event*> b
    if ea.value < eb.value:
        return -1
    if ea.value > eb.value:
        return 1
    return ea.kind - eb.kind


def certainty(x, double ex, en_prime):
    cdef const double[::1] xv = np.ascontiguousarray(x, dtype=np.float64)
    cdef const double[::1] ev = np.ascontiguousarray(en_prime, dtype=np.float64)
    cdef Py_ssize_t n = xv.shape[0], k
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] ov = out
    cdef double dx, e
    with nogil:
        for k in range(n):
            dx = xv[k] - ex
            e = ev[k]
            if e == 0.0:
                ov[k] = 1.0 if dx == 0.0 else 0.0
            else:
                ov[k] = exp(-(dx * dx) / (2.0 * e * e))
    return out


def iaa_sweep(lowers, uppers):
    cdef const double[::1] lo = np.ascontiguousarray(lowers, dtype=np.float64)
    cdef const double[::1] up = np.ascontiguousarray(uppers, dtype=np.float64)
    cdef Py_ssize_t n = lo.shape[0], i, k = 0
    events_arr = np.empty(2 * n, dtype=np.dtype([("value", np.float64), ("kind", np.int32)], align=True))
    cdef _Event[::1] events = events_arr
    for i in range(n):
        events[2 * i].value = lo[i]
        events[2 * i].kind = 0
        events[2 * i + 1].value = up[i]
        events[2 * i + 1].kind = 1
    if n > 0:
        qsort(&events[0], 2 * n, sizeof(_Event), _event_cmp)
    breaks = np.empty(2 * n, dtype=np.float64)
    counts = np.empty(2 * n, dtype=np.int64)
    cdef double[::1] bv = breaks
    cdef long long[::1] cv = counts
    cdef long long c = 0
    for i in range(2 * n):
        c += 1 - 2 * events[i].kind
        if i == 2 * n - 1 or events[i + 1].value != events[i].value:
            bv[k] = events[i].value
            cv[k] = c
            k += 1
    return breaks[:k].copy(), counts[:k].copy()


cdef void _pivot(double[:, ::1] T, Py_ssize_t row, Py_ssize_t col) noexcept nogil:
    cdef Py_ssize_t rows = T.shape[0], cols = T.shape[1], i, j
    cdef double piv = T[row, col], f
    for j in range(cols):
        T[row, j] = T[row, j] / piv
    for i in range(rows):
        if i == row:
            continue
        f = T[i, col]
        if f == 0.0:
            continue
        for j in range(cols):
            T[i, j] = T[i, j] - f * T[row, j]


def pivot(double[:, ::1] T, Py_ssize_t row, Py_ssize_t col):
    _pivot(T, row, col)


def simplex_iterate(double[:, ::1] T, cnp.intp_t[::1] basis, Py_ssize_t n_cols,
                    double tol, Py_ssize_t max_iter):
    return _simplex_iterate(T, basis, n_cols, tol, max_iter)


cdef int _simplex_iterate(double[:, ::1] T, cnp.intp_t[::1] basis, Py_ssize_t n_cols,
                          double tol, Py_ssize_t max_iter) noexcept nogil:
    cdef Py_ssize_t m = T.shape[0] - 1, last = T.shape[1] - 1
    cdef Py_ssize_t it, i, j, col, row
    cdef double best, r, a
    for it in range(max_iter):
        col = -1
        for j in range(n_cols):
            if T[m, j] < -tol:
                col = j
                break
        if col < 0:
            return _OPTIMAL
        row = -1
        best = 0.0
        for i in range(m):
            a = T[i, col]
            if a > tol:
                r = T[i, last] / a
                if row < 0 or r < best:
                    best = r
                    row = i
        if row < 0:
            return _UNBOUNDED
        row = -1
        for i in range(m):
            a = T[i, col]
            if a > tol and T[i, last] / a <= best + tol:
                if row < 0 or basis[i] < basis[row]:
                    row = i
        _pivot(T, row, col)
        basis[row] = col
    return _ITERATION_LIMIT

# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled twins of the routines in ``_kernels_py``.

Coefficients stay Python ints (they outgrow 64 bits quickly); the speedup
comes from typed index arithmetic and list access without bounds checks.
"""


def mul_trunc(list a, list b, Py_ssize_t n):
    cdef Py_ssize_t la = min(len(a), n)
    cdef Py_ssize_t lb = min(len(b), n)
    cdef Py_ssize_t i, j, top
    cdef list out = [0] * n
    cdef object ai, bj
    for i in range(la):
        ai = a[i]
        if not ai:
            continue
        top = min(lb, n - i)
        for j in range(top):
            bj = b[j]
            if bj:
                out[i + j] = out[i + j] + ai * bj
    return out


def inv_trunc_unit(list a, Py_ssize_t n):
    cdef object a0 = a[0]
    if a0 != 1 and a0 != -1:
        raise ValueError("leading coefficient must be a unit")
    cdef Py_ssize_t la = len(a)
    cdef list out = [0] * n
    cdef Py_ssize_t k, i, top
    cdef object acc, ai
    if n == 0:
        return out
    out[0] = a0
    for k in range(1, n):
        acc = 0
        top = min(k, la - 1)
        for i in range(1, top + 1):
            ai = a[i]
            if ai:
                acc = acc + ai * out[k - i]
        out[k] = -acc * a0
    return out


def apply_factor_2d(list grid, Py_ssize_t rows, Py_ssize_t cols,
                    Py_ssize_t dt, Py_ssize_t ds, list coeffs):
    if dt <= 0:
        raise ValueError("grading step must be positive")
    cdef Py_ssize_t kmax = len(coeffs) - 1
    cdef Py_ssize_t t, s, k, ss, base, steps
    cdef object c0 = coeffs[0]
    cdef bint unit = c0 == 1
    cdef object acc, v
    for t in range(rows - 1, -1, -1):
        base = t * cols
        steps = min(kmax, t // dt)
        for s in range(cols):
            acc = grid[base + s]
            if not unit:
                acc = acc * c0
            for k in range(1, steps + 1):
                ss = s - k * ds
                if ss < 0 or ss >= cols:
                    continue
                v = grid[(t - k * dt) * cols + ss]
                if v:
                    acc = acc + coeffs[k] * v
            grid[base + s] = acc
    return grid

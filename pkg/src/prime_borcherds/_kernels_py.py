"""Pure-Python reference kernels.

Every routine works on plain lists of Python ints so the compiled twin in
``_kernels.pyx`` can share the exact same contract.  These are imported when
the extension is missing or when ``PRIME_BORCHERDS_PURE=1``.
"""


def mul_trunc(a, b, n):
    """Return the first ``n`` coefficients of the product of ``a`` and ``b``."""
    la = min(len(a), n)
    lb = min(len(b), n)
    out = [0] * n
    for i in range(la):
        ai = a[i]
        if not ai:
            continue
        top = min(lb, n - i)
        for j in range(top):
            bj = b[j]
            if bj:
                out[i + j] += ai * bj
    return out


def inv_trunc_unit(a, n):
    """Invert ``a`` modulo ``x**n`` where ``a[0]`` is 1 or -1."""
    a0 = a[0]
    if a0 != 1 and a0 != -1:
        raise ValueError("leading coefficient must be a unit")
    la = len(a)
    out = [0] * n
    if n == 0:
        return out
    out[0] = a0
    for k in range(1, n):
        acc = 0
        top = min(k, la - 1)
        for i in range(1, top + 1):
            ai = a[i]
            if ai:
                acc += ai * out[k - i]
        out[k] = -acc * a0
    return out


def apply_factor_2d(grid, rows, cols, dt, ds, coeffs):
    """Multiply a dense 2-D series in place by ``sum_k coeffs[k] X**(k*(dt, ds))``.

    ``grid`` is row-major with ``rows`` grading levels and ``cols`` columns.
    Rows at or beyond ``rows`` are dropped, columns leaving the window are
    treated as zero.  ``dt`` must be positive so that rows can be rewritten
    from the top down without a scratch copy.
    """
    if dt <= 0:
        raise ValueError("grading step must be positive")
    kmax = len(coeffs) - 1
    c0 = coeffs[0]
    for t in range(rows - 1, -1, -1):
        base = t * cols
        steps = min(kmax, t // dt)
        for s in range(cols):
            acc = grid[base + s] * c0 if c0 != 1 else grid[base + s]
            for k in range(1, steps + 1):
                ss = s - k * ds
                if ss < 0 or ss >= cols:
                    continue
                v = grid[(t - k * dt) * cols + ss]
                if v:
                    acc += coeffs[k] * v
            grid[base + s] = acc
    return grid

"""Kernel dispatch: compiled extension when available, pure Python otherwise.

Set ``PRIME_BORCHERDS_PURE=1`` to force the fallback (used by the benchmark
and by the test that checks both backends agree).
"""

import os

from . import _kernels_py as pure

BACKEND = "python"
_compiled = None

if os.environ.get("PRIME_BORCHERDS_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _compiled  # type: ignore[attr-defined]
    except ImportError:
        _compiled = None

if _compiled is not None:
    BACKEND = "cython"
    mul_trunc = _compiled.mul_trunc
    inv_trunc_unit = _compiled.inv_trunc_unit
    apply_factor_2d = _compiled.apply_factor_2d
else:
    mul_trunc = pure.mul_trunc
    inv_trunc_unit = pure.inv_trunc_unit
    apply_factor_2d = pure.apply_factor_2d


def compiled_module():
    """Return the compiled kernel module, or None if it was not built."""
    return _compiled


def thread_cap():
    """Worker cap from ``PRIME_BORCHERDS_THREADS`` (0 or unset means auto)."""
    raw = os.environ.get("PRIME_BORCHERDS_THREADS", "0").strip() or "0"
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"PRIME_BORCHERDS_THREADS must be an integer, got {raw!r}")
    if n < 0:
        raise ValueError("PRIME_BORCHERDS_THREADS must be >= 0")
    if n == 0:
        n = os.cpu_count() or 1
    return n

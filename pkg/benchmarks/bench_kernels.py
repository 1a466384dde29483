"""Compiled kernels against the pure-Python fallback.

    python benchmarks/bench_kernels.py [--repeat N]

Skips the compiled column when the extension was not built.
"""

import argparse
import random
import timeit

from prime_borcherds import _kernels_py as pure
from prime_borcherds.kernels import compiled_module


def cases(rng):
    a = [rng.randint(-10**6, 10**6) for _ in range(400)]
    b = [rng.randint(-10**6, 10**6) for _ in range(400)]
    unit = [1] + [rng.randint(-50, 50) for _ in range(399)]
    rows, cols = 120, 81
    grid = [0] * (rows * cols)
    grid[cols // 2] = 1
    coeffs = [1, -7, 21, -35, 35, -21, 7, -1]
    return {
        "mul_trunc(400)": lambda m: m.mul_trunc(a, b, 400),
        "inv_trunc_unit(400)": lambda m: m.inv_trunc_unit(unit, 400),
        "apply_factor_2d(120x81)": lambda m: m.apply_factor_2d(list(grid), rows, cols, 2, 1, coeffs),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    compiled = compiled_module()
    rng = random.Random(0)
    print(f"{'kernel':<26}{'python (ms)':>14}{'cython (ms)':>14}{'speedup':>10}")
    for name, fn in cases(rng).items():
        tp = min(timeit.repeat(lambda: fn(pure), number=1, repeat=args.repeat)) * 1e3
        if compiled is None:
            print(f"{name:<26}{tp:>14.2f}{'n/a':>14}{'':>10}")
            continue
        assert fn(pure) == fn(compiled)
        tc = min(timeit.repeat(lambda: fn(compiled), number=1, repeat=args.repeat)) * 1e3
        print(f"{name:<26}{tp:>14.2f}{tc:>14.2f}{tp / tc:>9.1f}x")


if __name__ == "__main__":
    main()

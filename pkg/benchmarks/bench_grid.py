"""Compare the compiled and pure-Python lattice maximizers.

    python benchmarks/bench_grid.py [--repeat 3]

Both backends must return identical argmax, point and pole counts.
"""

import argparse
import sys
import time

from jacbound import _grid_py, grid
from jacbound.bounds import SpaceParams

CASES = [
    ((2, 2, 1), 40),
    ((1, 3, 0), 40),
    ((2, 3, 1), 20),
    ((4, 2, 1), 14),
]


def kernel_args(params: SpaceParams, res: int):
    pair = [i if i < params.j else params.dn - 1 - i for i in range(params.p)]
    coef = [0.0 if i < params.j else float(params.d - 1) for i in range(params.p)]
    return pair, coef, 1.0 / res, res


def best_of(fn, args, repeat):
    best, out = float("inf"), None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t)
    return best, out


def main(argv=None) -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    if grid.BACKEND != "cython":
        print("compiled kernel not built; only the Python backend is available", file=sys.stderr)
        return 1
    compiled = grid._impl.grid_max
    print(f"{'case':<22}{'points':>10}{'cython s':>11}{'python s':>11}{'speedup':>9}  agree")
    ok = True
    for t, res in CASES:
        kargs = kernel_args(SpaceParams(*t), res)
        tc, rc = best_of(compiled, kargs, args.repeat)
        tp, rp = best_of(_grid_py.grid_max, kargs, args.repeat)
        agree = list(rc[0]) == list(rp[0]) and rc[2:] == rp[2:] and rc[1] == rp[1]
        ok &= agree
        print(f"{str(t) + ' grid=' + str(res):<22}{rc[2]:>10}{tc:>11.4f}{tp:>11.4f}{tp / tc:>8.1f}x  {agree}")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())

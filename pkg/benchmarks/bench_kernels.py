"""Compare the compiled and pure-Python Poisson kernels.

    python benchmarks/bench_kernels.py [--repeat 5] [--n 100 10000 1000000]

Prints one row per (kernel, n) with the best-of-``repeat`` time for each
backend, the speedup and the largest relative disagreement between them.
"""

from __future__ import annotations

import argparse
import math
import sys
import timeit

from chernofflab import _kernels_py

try:
    from chernofflab import _kernels as _kernels_c
except ImportError:
    _kernels_c = None


def _cases(n: int):
    eps = n ** (1 / 6 + 0.5)
    return {
        "poisson_moments": lambda k: k.poisson_moments(n, eps),
        "poisson_weights": lambda k: k.poisson_weights(n, *k.poisson_window(n)),
    }


def _rel(a, b) -> float:
    a = [float(v) for v in (a if hasattr(a, "__len__") else [a])]
    b = [float(v) for v in (b if hasattr(b, "__len__") else [b])]
    return max(abs(x - y) / max(abs(x), abs(y), 1e-300) for x, y in zip(a, b))


def run(ns, repeat: int) -> list[dict]:
    rows = []
    for n in ns:
        for name, call in _cases(n).items():
            row = {"kernel": name, "n": n}
            for label, mod in (("python", _kernels_py), ("cython", _kernels_c)):
                if mod is None:
                    row[label] = math.nan
                    continue
                number = max(1, int(0.2 / max(timeit.timeit(lambda: call(mod), number=1), 1e-7)))
                row[label] = min(timeit.repeat(lambda: call(mod), number=number, repeat=repeat)) / number
            row["speedup"] = row["python"] / row["cython"] if _kernels_c else math.nan
            row["max_rel_diff"] = _rel(call(_kernels_py), call(_kernels_c)) if _kernels_c else math.nan
            rows.append(row)
    return rows


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--n", type=int, nargs="+", default=[100, 10_000, 1_000_000])
    p.add_argument("--repeat", type=int, default=5)
    args = p.parse_args(argv)
    if _kernels_c is None:
        print("compiled extension not built; timing the pure-Python backend only", file=sys.stderr)
    print(f"{'kernel':<16} {'n':>8} {'python [s]':>12} {'cython [s]':>12} {'speedup':>9} {'max rel diff':>13}")
    for r in run(args.n, args.repeat):
        print(f"{r['kernel']:<16} {r['n']:>8} {r['python']:>12.3e} {r['cython']:>12.3e} "
              f"{r['speedup']:>9.1f} {r['max_rel_diff']:>13.1e}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

"""Compare the compiled kernels with the pure-Python fallback.

The inputs are captured from a real pipeline run, so both backends see the
same arrays.  Outputs are checked for equality before timing.

    python benchmarks/bench_kernels.py --n 100000 --d 64 --repeat 5
"""

import argparse
import time

import numpy as np

from inducedpath import _kernels
from inducedpath._kernels import _pure
from inducedpath.connector_pipeline import full_pipeline

KERNELS = ("grow_forest", "classify_connectors", "conflict_dfs")


def capture(n, d, eps, seed):
    """Run the pipeline once and keep the arguments of every kernel call."""
    calls = {}
    saved = {name: getattr(_kernels, name) for name in KERNELS}

    def recorder(name):
        def wrapped(*args):
            calls.setdefault(name, args)
            return saved[name](*args)
        return wrapped

    try:
        for name in KERNELS:
            setattr(_kernels, name, recorder(name))
        full_pipeline(n, d, eps, seed)
    finally:
        for name, fn in saved.items():
            setattr(_kernels, name, fn)
    return calls


def best_of(fn, args, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        times.append(time.perf_counter() - t0)
    return min(times)


def same(a, b):
    if isinstance(a, tuple):
        return len(a) == len(b) and all(same(x, y) for x, y in zip(a, b))
    return np.array_equal(np.asarray(a), np.asarray(b))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=100_000)
    ap.add_argument("--d", type=float, default=64)
    ap.add_argument("--eps", type=float, default=0.25)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    compiled = _kernels.compiled()
    if compiled is None:
        raise SystemExit("compiled extension not built; run `pip install -e . --no-build-isolation`")
    calls = capture(args.n, args.d, args.eps, args.seed)

    print(f"n={args.n} d={args.d:g} eps={args.eps:g} seed={args.seed}, best of {args.repeat}")
    print(f"{'kernel':<22}{'python ms':>12}{'cython ms':>12}{'speedup':>10}")
    for name in KERNELS:
        if name not in calls:
            print(f"{name:<22}{'not called':>34}")
            continue
        call = calls[name]
        py_fn, cy_fn = getattr(_pure, name), getattr(compiled, name)
        if not same(py_fn(*call), cy_fn(*call)):
            raise SystemExit(f"{name}: backends disagree")
        t_py = best_of(py_fn, call, args.repeat)
        t_cy = best_of(cy_fn, call, args.repeat)
        print(f"{name:<22}{t_py * 1e3:>12.2f}{t_cy * 1e3:>12.2f}{t_py / t_cy:>9.1f}x")


if __name__ == "__main__":
    main()

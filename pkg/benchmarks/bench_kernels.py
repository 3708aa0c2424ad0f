"""Time the compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import time

import numpy as np

from ffchains import kernels
from ffchains.constructions import butterfly_lower_bound, ladder, random_poset, reservoir
from ffchains.firstfit import first_fit, wall_violation
from ffchains.poset import contains_subposet, induced


def _best(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def cases():
    R5 = reservoir(5)
    B5 = butterfly_lower_bound(5)
    rng = np.random.default_rng(0)
    P400 = random_poset(400, 0.02, rng)
    order = rng.permutation(R5.poset.n)
    W400 = first_fit(P400, range(400)).chains
    sub, _ = induced(ladder(10), range(0, 20, 2))

    def closure(impl):
        m = np.ascontiguousarray(np.triu(rng.random((400, 400)) < 0.01, 1).astype(np.uint8))
        impl.close_inplace(m)

    def matching(impl):
        m = np.full(R5.poset.n, -1, dtype=np.int64)
        impl.bipartite_matching(np.ascontiguousarray(R5.poset.lt.view(np.uint8)), m)

    return {
        "closure n=400": lambda name: closure(kernels.get_backend(name)),
        "first_fit R5 (1573)": lambda name: first_fit(R5.poset, order, backend=name),
        "wall check q=5 (341)": lambda name: wall_violation(B5.poset, B5.wall, backend=name),
        "wall check n=400": lambda name: wall_violation(P400, W400, backend=name),
        "embed in ladder(10)": lambda name: contains_subposet(ladder(10), sub, backend=name),
        "matching R5 (1573)": lambda name: matching(kernels.get_backend(name)),
    }


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    names = [b for b in ("python", "cython") if b in kernels.BACKENDS]
    print(f"{'case':<24}" + "".join(f"{n:>12}" for n in names) + ("     speedup" if len(names) == 2 else ""))
    for label, fn in cases().items():
        times = [_best(lambda: fn(n), args.repeat) for n in names]
        row = f"{label:<24}" + "".join(f"{t * 1e3:>10.2f}ms" for t in times)
        if len(times) == 2:
            row += f"{times[0] / times[1]:>11.1f}x"
        print(row)


if __name__ == "__main__":
    main()

"""Time the subset-enumeration oracle under numba and numpy, next to the labelling solver.

    python benchmarks/bench_oracle.py --sizes 10 14 18 --repeat 5
"""

import argparse
import statistics
import time

import numpy as np

from argmed import _kernels as K
from argmed import semantics as S
from argmed.generate import random_framework


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times), statistics.median(times)


def oracle(fw, backend):
    ids, a_in, a_out = S._bit_encoding(fw)
    _, adm = K.subset_tables(a_in, a_out, len(ids), backend)
    return K.maximal(adm, len(ids), backend)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[8, 12, 16, 20])
    ap.add_argument("--density", type=float, default=0.25)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    backends = ["numpy"] + (["numba"] if K.HAVE_NUMBA else [])
    if "numba" in backends:
        oracle(random_framework(np.random.default_rng(0), 4, 0.3), "numba")  # compile outside the timing

    print(f"default backend: {K.DEFAULT_BACKEND}")
    print(f"{'n':>4} {'attacks':>8} " + " ".join(f"{b + ' (ms)':>14}" for b in backends) + f" {'labelling (ms)':>15}")
    for n in args.sizes:
        fw = random_framework(np.random.default_rng(args.seed + n), n, args.density)
        row = [f"{n:>4}", f"{len(fw.attacks):>8}"]
        results = {}
        for b in backends:
            best, _ = best_of(lambda: results.__setitem__(b, oracle(fw, b)), args.repeat)
            row.append(f"{best * 1e3:>14.2f}")
        if len(results) == 2:
            assert np.array_equal(results["numpy"], results["numba"])
        best, _ = best_of(lambda: S.preferred_extensions(fw), args.repeat)
        row.append(f"{best * 1e3:>15.2f}")
        print(" ".join(row))


if __name__ == "__main__":
    main()

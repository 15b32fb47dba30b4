"""Time the numba and numpy kernels on the same random batch.

    python benchmarks/bench_kernels.py --n 1000 --batch 2000 --repeat 5

Each kernel is called once untimed (numba compilation) and then ``repeat``
times; the best time is reported. Outputs of both backends are compared.
"""
import argparse
import time

import numpy as np

from tiledsurf import kernels
from tiledsurf.mc import sample_gluings
from tiledsurf.perm import make_rng


def best_of(fn, repeat):
    fn()
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main(argv=None):
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=1000)
    ap.add_argument("--batch", type=int, default=2000)
    ap.add_argument("--k", type=int, default=2)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)

    stack = sample_gluings(make_rng(0), args.k, args.batch, args.n)
    c = kernels.NUMPY_KERNELS["word_rows"](stack, "c")
    cases = {
        "compose_rows": (stack[0], stack[1]),
        "invert_rows": (stack[0],),
        "word_rows": (stack, "c"),
        "cycle_stats": (c,),
        "cycle_lengths": (c,),
        "holonomy_mask": (stack[0], stack[1], c),
        "orbit_counts": (stack,),
    }
    print(f"n={args.n} batch={args.batch} k={args.k} best of {args.repeat}")
    print(f"{'kernel':<15}{'numba ms':>12}{'numpy ms':>12}{'speedup':>10}  same")
    for name, call_args in cases.items():
        nb, npk = kernels.NUMBA_KERNELS[name], kernels.NUMPY_KERNELS[name]
        same = np.array_equal(nb(*call_args), npk(*call_args))
        t_nb = best_of(lambda: nb(*call_args), args.repeat)
        t_np = best_of(lambda: npk(*call_args), args.repeat)
        print(f"{name:<15}{t_nb * 1e3:12.2f}{t_np * 1e3:12.2f}{t_np / t_nb:10.1f}  {same}")


if __name__ == "__main__":
    main()

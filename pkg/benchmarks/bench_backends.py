"""Compare the compiled and pure-Python simulation backends.

    python benchmarks/bench_backends.py [--reps 20000] [--repeat 3]

For each workload both backends run the same replications; the outputs are
checked to be identical and the best-of-``repeat`` throughput is reported.
"""
from __future__ import annotations

import argparse
import sys
import time

import numpy as np

from efron_dual import kernels
from efron_dual.geometry import parse_body

WORKLOADS = [
    ("interval", 4, (3, 4)),
    ("triangle", 4, (3, 4)),
    ("square", 4, (2, 4)),
    ("disk", 8, (4, 8)),
    ("hexagon", 12, (6, 12)),
    ("cube3", 4, (3, 4)),
    ("ball3", 10, (5, 10)),
]


def best_time(fn, repeat):
    best, out = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--reps", type=int, default=20_000)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args(argv)
    if "cython" not in kernels.BACKENDS:
        print("compiled core not available; build with `pip install -e . --no-build-isolation`")
        return 1

    print(f"{'body':9s} {'pts':>4s} {'compiled rep/s':>15s} {'python rep/s':>13s} {'speedup':>8s}  identical")
    for name, npts, prefixes in WORKLOADS:
        body = parse_body(name)
        times = {}
        outs = {}
        for backend in ("cython", "python"):
            reps = args.reps if backend == "cython" else max(args.reps // 20, 200)
            dt, out = best_time(
                lambda: kernels.simulate(body, npts, prefixes, args.seed, reps, backend=backend),
                args.repeat if backend == "cython" else 1,
            )
            times[backend] = reps / dt
            outs[backend] = out
        n = len(outs["python"].lead)
        same = (np.array_equal(outs["cython"].volumes[:n], outs["python"].volumes)
                and np.array_equal(outs["cython"].counts[:n], outs["python"].counts)
                and np.array_equal(outs["cython"].lead[:n], outs["python"].lead))
        print(f"{name:9s} {npts:4d} {times['cython']:15,.0f} {times['python']:13,.0f} "
              f"{times['cython'] / times['python']:7.0f}x  {'yes' if same else 'NO'}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

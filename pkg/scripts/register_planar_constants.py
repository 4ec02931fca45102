"""Compute and register the planar reference constants.

Each E V_3 / vol K value is computed twice, by deterministic quadrature and
by a high-replication simulation on a dedicated seed; it is written to the
registry only if the two agree to three significant figures (relative
difference below 5e-4).

    python scripts/register_planar_constants.py [--orders 32 48 64] [--reps 20000000]
"""
from __future__ import annotations

import argparse
import sys
import time
from fractions import Fraction
from pathlib import Path

from efron_dual.geometry.bodies import parse_body
from efron_dual.montecarlo import estimate_volume_moment
from efron_dual.oracle import OracleValue, format_registry, interval_volume_moment, extrapolated_triangle_area_ratio
from efron_dual.rng import derive_seed

DEFAULT_OUT = Path(__file__).resolve().parents[1] / "src" / "efron_dual" / "data" / "planar_reference.tsv"
REGISTRY_SEED = 20240901


def corners(body):
    if body.vertices:
        return body.vertices
    lo, side = body.lo, body.width
    return [(lo, lo), (lo + side, lo), (lo + side, lo + side), (lo, lo + side)]


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--orders", type=int, nargs=3, default=(32, 48, 64))
    ap.add_argument("--reps", type=int, default=20_000_000)
    ap.add_argument("--workers", type=int, default=4)
    ap.add_argument("--out", type=Path, default=DEFAULT_OUT)
    args = ap.parse_args(argv)

    entries = []
    ok = True
    for name in ("triangle", "square"):
        body = parse_body(name)
        t0 = time.perf_counter()
        quad, qerr, rate = extrapolated_triangle_area_ratio(corners(body), tuple(args.orders))
        tq = time.perf_counter() - t0
        seed = derive_seed(REGISTRY_SEED, "register", name)
        t0 = time.perf_counter()
        est = estimate_volume_moment(body, 3, 1, args.reps, seed, workers=args.workers)
        ts = time.perf_counter() - t0
        rel = abs(quad - est.mean) / abs(quad)
        agree = rel < 5e-4
        ok &= agree
        print(f"{name:8s} quadrature {quad:.8f} +- {qerr:.0e} ({tq:.1f}s)  simulation {est.mean:.8f} +- {est.stderr:.1e} "
              f"({ts:.1f}s)  rel diff {rel:.1e}  {'agree' if agree else 'DISAGREE'}")
        orders = "/".join(map(str, args.orders))
        detail = (f"Gauss-Legendre orders {orders} on fan triangles, inner integral closed form, "
                  f"Richardson rate {rate:.2f}, extrapolation step {qerr:.1e}; "
                  f"cross-checked by {args.reps} replications (seed {seed}): {est.mean:.7f} +- {est.stderr:.1e}")
        entries.append(OracleValue(f"{name}/EV3/vol", quad, "numerical-integration", detail))

    entries.append(OracleValue("interval/EV2/vol", interval_volume_moment(2, 1), "closed-form",
                               "range of two uniforms is Beta(1, 2); mean 1/3"))
    assert isinstance(entries[-1].value, Fraction)
    if not ok:
        print("methods disagree; registry not written", file=sys.stderr)
        return 1
    args.out.write_text(format_registry(entries), encoding="utf-8")
    print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

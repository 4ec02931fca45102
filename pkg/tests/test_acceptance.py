"""Acceptance criteria, one test per criterion.

Each criterion records a one-line PASS/FAIL verdict, printed at the end of
the pytest run (and by ``python tests/test_acceptance.py``).
"""
from __future__ import annotations

import functools
import time
from fractions import Fraction

import pytest

from efron_dual.cli import report_to_json
from efron_dual.duality import eq2_eq3_pointwise, expect_identity_eq3, expect_identity_eq4, verify_involution
from efron_dual.exactsym import verify_proposition
from efron_dual.geometry import parse_body
from efron_dual.montecarlo import check_identity, estimate_volume_moment
from efron_dual.oracle import interval_vertex_law, interval_volume_moment, planar_reference

SEED = 42
MILLION = 10**6
RESULTS: dict[int, tuple[bool, str]] = {}


def record(num, ok, detail):
    RESULTS[num] = (bool(ok), detail)
    return bool(ok), detail


def timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


# ---------------------------------------------------------------- statistical runs (cached for criterion 10)


@functools.lru_cache(maxsize=None)
def run5(workers=1):
    return timed(lambda: check_identity(parse_body("triangle"), "efron-eq1", 3, reps=MILLION, seed=SEED,
                                        mode="coupled", workers=workers))


@functools.lru_cache(maxsize=None)
def run6(workers=1):
    return timed(lambda: check_identity(parse_body("square"), "factorial-eq3", 2, 2, reps=MILLION, seed=SEED,
                                        workers=workers))


@functools.lru_cache(maxsize=None)
def run7(workers=1):
    return timed(lambda: check_identity(parse_body("square"), "dual-eq4", 2, 2, reps=MILLION, seed=SEED,
                                        mode="independent", workers=workers))


THM2_CASES = (("triangle", 3, 1), ("square", 4, 2), ("cube3", 4, 1))


@functools.lru_cache(maxsize=None)
def run8(workers=1):
    return tuple(
        check_identity(parse_body(b), "thm2-direct-vs-ratio", m=m, j=j, reps=10**5, seed=SEED,
                       mode="independent", tolerance_sigma=5.0, workers=workers)
        for b, m, j in THM2_CASES
    )


@functools.lru_cache(maxsize=None)
def run9(workers=1):
    body = parse_body("cube3")
    vol = estimate_volume_moment(body, 3, 1, MILLION, SEED, workers=workers)
    rep = check_identity(body, "factorial-eq3", 3, 1, reps=MILLION, seed=SEED, workers=workers)
    return vol, rep


# ---------------------------------------------------------------- criteria


def criterion_1():
    report, dt = timed(lambda: verify_proposition(12))
    ok = all(c.passed for c in report) and len(report) == 91 and dt < 10
    return record(1, ok, f"proposition exact for {sum(c.passed for c in report)}/91 (k, j) pairs in {dt:.2f}s")


def criterion_2():
    res, dt = timed(lambda: [verify_involution(k) for k in range(65)])
    return record(2, all(res) and dt < 5, f"A_k^2 = I for {sum(res)}/65 orders in {dt:.2f}s")


def criterion_3():
    def sweep():
        return [eq2_eq3_pointwise(N, n, k) for N in range(41) for n in range(1, 21) for k in range(1, 11)]

    pairs, dt = timed(sweep)
    good = sum(lhs == rhs for lhs, rhs in pairs)
    # 41 values of N, 20 of n, 10 of k
    return record(3, good == 41 * 20 * 10 == len(pairs) and dt < 10, f"{good}/{len(pairs)} pointwise cases equal in {dt:.2f}s")


def criterion_4():
    n3 = n4 = 0
    for n in range(1, 11):
        for k in range(1, 5):
            law = interval_vertex_law(n + k)
            n3 += expect_identity_eq3(law, n, k, interval_volume_moment(n, k)).passed
            v = [interval_volume_moment(n + k - j, j) for j in range(k + 1)]
            n4 += expect_identity_eq4(law, n, k, v).passed
    return record(4, n3 == n4 == 40, f"factorial form exact {n3}/40, dual form exact {n4}/40")


def criterion_5():
    rep, dt = run5()
    ref = planar_reference("triangle", "EV3/vol").value
    diff = abs(rep.lhs.mean - rep.rhs.mean)
    z_ref = max(abs(rep.lhs.mean - ref) / rep.lhs.stderr, abs(rep.rhs.mean - ref) / rep.rhs.stderr)
    ok = rep.passed and diff < 1e-3 and z_ref <= 4 and dt < 60
    return record(5, ok, f"lhs {rep.lhs.mean:.5f} rhs {rep.rhs.mean:.5f} |diff| {diff:.1e} z {rep.z_score:.2f}; "
                         f"registry {ref:.5f} within {z_ref:.2f} sigma; {dt:.1f}s")


def criterion_6():
    rep, dt = run6()
    return record(6, rep.passed and dt < 120,
                  f"lhs {rep.lhs.mean:.3g} rhs {rep.rhs.mean:.3g} z {rep.z_score:.2f}; {dt:.1f}s")


def criterion_7():
    rep, dt = run7()
    return record(7, rep.passed, f"lhs {rep.lhs.mean:.5f} rhs {rep.rhs.mean:.5f} z {rep.z_score:.2f} "
                                 f"(independent streams); {dt:.1f}s")


def criterion_8():
    reps = run8()
    parts = [f"{b} m={m} j={j} z {r.z_score:.2f}" for (b, m, j), r in zip(THM2_CASES, reps)]
    return record(8, all(r.passed for r in reps), "; ".join(parts))


def criterion_9():
    vol, rep = run9()
    ok = vol.mean == 0.0 and vol.stderr == 0.0 and rep.passed
    return record(9, ok, f"E V_3 = {vol.mean!r} exactly; factorial form z {rep.z_score:.2f}")


def _reports(workers):
    out = [run5(workers)[0], run6(workers)[0], run7(workers)[0], *run8(workers), run9(workers)[1]]
    return [report_to_json([r.to_dict()], single=True).encode() for r in out]


def criterion_10():
    one, four = _reports(1), _reports(4)
    same = sum(a == b for a, b in zip(one, four))
    return record(10, same == len(one), f"{same}/{len(one)} report files byte-identical for 1 vs 4 workers")


CRITERIA = {i: globals()[f"criterion_{i}"] for i in range(1, 11)}


@pytest.mark.parametrize("num", list(CRITERIA))
def test_criterion(num):
    ok, detail = CRITERIA[num]()
    assert ok, detail


def summary_lines():
    return [f"criterion {num:>2}: {'PASS' if ok else 'FAIL'}  {detail}" for num, (ok, detail) in sorted(RESULTS.items())]


if __name__ == "__main__":
    for fn in CRITERIA.values():
        fn()
    print("\n".join(summary_lines()))

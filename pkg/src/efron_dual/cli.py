"""Command-line front end.

Exit codes: 0 success, 1 statistical failure (or a failed exact check),
2 usage error or malformed input.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import random
import sys
import time
from fractions import Fraction

from . import __version__, duality, exactsym
from .errors import ContractViolation
from .geometry.bodies import parse_body
from .montecarlo import DEFAULT_TOLERANCE_SIGMA, IDENTITIES, MODES, IdentityReport, check_identity

log = logging.getLogger("efron_dual")

SEED_ENV = "EFRON_DUAL_SEED"
CHECK_DEFAULTS = {
    "identity": None,
    "body": None,
    "n": None,
    "k": None,
    "m": None,
    "j": None,
    "reps": 100_000,
    "seed": 0,
    "mode": "coupled",
    "tolerance_sigma": DEFAULT_TOLERANCE_SIGMA,
    "format": "json",
    "out": None,
    "workers": 1,
    "backend": None,
}
_INT_KEYS = {"n", "k", "m", "j", "reps", "seed", "workers"}
CSV_FIELDS = [
    "identity", "body", "n", "k", "m", "j",
    "lhs_mean", "lhs_stderr", "lhs_reps", "rhs_mean", "rhs_stderr", "rhs_reps",
    "z_score", "tolerance_sigma", "pass", "mode", "paired_stderr", "paired_z_score", "master_seed", "exact_target", "artifact_version",
]


class UsageError(Exception):
    pass


# ---------------------------------------------------------------- serialization


def report_to_json(reports: list[dict], single: bool = False) -> str:
    doc = reports[0] if single else {"reports": reports}
    return json.dumps(doc, indent=2) + "\n"


def _num(x) -> str:
    return "" if x is None else repr(x)


def report_to_csv(reports: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_FIELDS)
    for d in reports:
        p = d["parameters"]
        target = d.get("exact_target")
        w.writerow([
            d["identity"], d["body"], p.get("n"), p.get("k"), p.get("m"), p.get("j"),
            repr(d["lhs"]["mean"]), repr(d["lhs"]["stderr"]), d["lhs"]["reps"],
            repr(d["rhs"]["mean"]), repr(d["rhs"]["stderr"]), d["rhs"]["reps"],
            repr(d["z_score"]), repr(d["tolerance_sigma"]), d["pass"], d["mode"],
            _num(d["paired_stderr"]), _num(d["paired_z_score"]), d["master_seed"],
            "" if target is None else target["rational"], d["artifact_version"],
        ])
    return buf.getvalue()


def parse_report_file(path: str) -> list[dict]:
    """Reports stored in ``path`` (a single report or a merged document), normalised."""
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    items = doc["reports"] if isinstance(doc, dict) and "reports" in doc else [doc]
    if not isinstance(items, list):
        raise ValueError("'reports' must be a list")
    return [IdentityReport.from_dict(item).to_dict() for item in items]


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------- config


def read_config(path: str) -> dict:
    """Flat ``key = value`` file; ``#`` starts a comment."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected 'key = value'")
            key, value = (t.strip() for t in line.split("=", 1))
            key = key.replace("-", "_")
            if key not in CHECK_DEFAULTS:
                raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
            out[key] = value
    return out


def _coerce(key: str, value):
    if value is None:
        return None
    try:
        if key in _INT_KEYS:
            return int(value)
        if key == "tolerance_sigma":
            return float(value)
    except ValueError:
        raise UsageError(f"{key} must be numeric, got {value!r}") from None
    return value


def resolve_check_config(args: argparse.Namespace) -> dict:
    """Flags override the config file, which overrides $EFRON_DUAL_SEED and the defaults."""
    cfg = dict(CHECK_DEFAULTS)
    env_seed = os.environ.get(SEED_ENV)
    if env_seed is not None and env_seed.strip():
        cfg["seed"] = env_seed.strip()
    if args.config:
        try:
            cfg.update(read_config(args.config))
        except OSError as exc:
            raise UsageError(f"cannot read config: {exc}") from None
    for key in CHECK_DEFAULTS:
        value = getattr(args, key, None)
        if value is not None:
            cfg[key] = value
    cfg = {key: _coerce(key, v) for key, v in cfg.items()}
    if cfg["identity"] not in IDENTITIES:
        raise UsageError(f"--identity must be one of {', '.join(IDENTITIES)}")
    if cfg["body"] is None:
        raise UsageError("--body is required")
    if cfg["mode"] not in MODES:
        raise UsageError(f"--mode must be one of {', '.join(MODES)}")
    if cfg["format"] not in ("json", "csv"):
        raise UsageError("--format must be json or csv")
    if cfg["reps"] < 2:
        raise UsageError("--reps must be at least 2")
    if not 0 <= cfg["seed"] < 1 << 64:
        raise UsageError("--seed must be a 64-bit unsigned integer")
    if cfg["workers"] < 1:
        raise UsageError("--workers must be positive")
    return cfg


# ---------------------------------------------------------------- commands


def _row(label: str, total: int, failed: int) -> str:
    return f"  {label:<38} {total:>7} {failed:>7}  {'PASS' if failed == 0 else 'FAIL'}"


def cmd_verify_sym(k_max: int) -> int:
    if k_max < 1:
        raise UsageError("--k-max must be at least 1")
    rng = random.Random(20240601)
    pool = [Fraction(p, q) for p in range(-4, 5) for q in (1, 2, 3)]
    rows = []

    prop = exactsym.verify_proposition(k_max)
    rows.append((f"decomposition, 0 <= j <= k <= {k_max}", len(prop), sum(not c.passed for c in prop)))

    seqs = [[rng.choice(pool) for _ in range(rng.randint(0, 10))] for _ in range(200)]
    rows.append(("recurrence, random k <= 10", len(seqs), sum(not exactsym.check_recurrence(s) for s in seqs)))
    rows.append(("generating function, random k <= 10", len(seqs),
                 sum(not exactsym.check_gen_poly(s) for s in seqs)))

    import math

    binom = [(k, j) for k in range(21) for j in range(k + 1)]
    rows.append(("binomial specialization, k <= 20", len(binom),
                 sum(exactsym.elem_sym([1] * k, j) != math.comb(k, j) for k, j in binom)))

    print(f"  {'suite':<38} {'cases':>7} {'failed':>7}  verdict")
    for label, total, failed in rows:
        print(_row(label, total, failed))
    return 0 if all(f == 0 for _, _, f in rows) else 1


def cmd_verify_dual(k_max: int) -> int:
    if k_max < 0:
        raise UsageError("--k-max must be nonnegative")
    rng = random.Random(1965)
    rows = []
    rows.append((f"involution A_k^2 = I, k <= {k_max}", k_max + 1,
                 sum(not duality.verify_involution(k) for k in range(k_max + 1))))

    cases = [(N, n, k) for N in range(41) for n in range(1, 21) for k in range(1, 11)]
    bad = 0
    for N, n, k in cases:
        lhs, rhs = duality.eq2_eq3_pointwise(N, n, k)
        bad += lhs != rhs
    rows.append(("pointwise product = factorial form", len(cases), bad))

    trips = 0
    bad = 0
    for k in range(min(k_max, 24) + 1):
        for _ in range(5):
            entries = (Fraction(1),) + tuple(Fraction(rng.randint(-50, 50), rng.randint(1, 30)) for _ in range(k))
            vec = duality.MomentVector(duality.MomentKind.VOLUME, entries, 1, k)
            bad += duality.transform(duality.transform(vec)) != vec
            trips += 1
    rows.append(("round trip transform", trips, bad))

    print(f"  {'suite':<38} {'cases':>7} {'failed':>7}  verdict")
    for label, total, failed in rows:
        print(_row(label, total, failed))
    return 0 if all(f == 0 for _, _, f in rows) else 1


def cmd_check(cfg: dict) -> int:
    try:
        body = parse_body(cfg["body"])
    except ContractViolation as exc:
        raise UsageError(str(exc)) from None
    thm2 = cfg["identity"] == "thm2-direct-vs-ratio"
    n = cfg["m"] if thm2 and cfg["m"] is not None else cfg["n"]
    k = cfg["j"] if thm2 and cfg["j"] is not None else cfg["k"]
    if n is None:
        raise UsageError("--m is required" if thm2 else "--n is required")
    if thm2 and k is None:
        raise UsageError("--j is required")
    t0 = time.perf_counter()
    try:
        rep = check_identity(
            body, cfg["identity"], n, k, reps=cfg["reps"], seed=cfg["seed"], mode=cfg["mode"],
            tolerance_sigma=cfg["tolerance_sigma"], workers=cfg["workers"], backend=cfg["backend"],
        )
    except (ContractViolation, KeyError) as exc:
        raise UsageError(str(exc)) from None
    d = rep.to_dict()
    text = report_to_json([d], single=True) if cfg["format"] == "json" else report_to_csv([d])
    _emit(text, cfg["out"])
    target = f", exact target {rep.exact_target} = {float(rep.exact_target)!r}" if rep.exact_target is not None else ""
    print(
        f"{rep.identity} on {rep.body}: lhs {rep.lhs.mean:.6g} +- {rep.lhs.stderr:.2g}, "
        f"rhs {rep.rhs.mean:.6g} +- {rep.rhs.stderr:.2g}, z = {rep.z_score:.3f} "
        f"(tol {rep.tolerance_sigma:g}){target} -> {'PASS' if rep.passed else 'FAIL'} "
        f"[{time.perf_counter() - t0:.1f}s]",
        file=sys.stderr,
    )
    return 0 if rep.passed else 1


def cmd_report(inputs: list[str], fmt: str, out: str | None) -> int:
    reports = []
    for path in inputs:
        try:
            reports.extend(parse_report_file(path))
        except (OSError, ValueError, KeyError, TypeError) as exc:
            raise UsageError(f"malformed report {path}: {exc}") from None
    _emit(report_to_json(reports) if fmt == "json" else report_to_csv(reports), out)
    return 0


# ---------------------------------------------------------------- entry point


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="efron-dual", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("verify-sym", help="exact symmetric-polynomial suites")
    s.add_argument("--k-max", type=int, default=12)

    s = sub.add_parser("verify-dual", help="exact involution / pointwise / round-trip suites")
    s.add_argument("--k-max", type=int, default=64)

    s = sub.add_parser("check", help="Monte Carlo check of one identity instance")
    s.add_argument("--config", help="flat key = value file; flags take precedence")
    s.add_argument("--identity", choices=IDENTITIES)
    s.add_argument("--body", help="preset name or kind:params, e.g. triangle, cube:3,1, polygon:0,0;1,0;0,1")
    for name in ("n", "k", "m", "j", "reps", "seed", "workers"):
        s.add_argument(f"--{name}", type=int)
    s.add_argument("--mode", choices=MODES)
    s.add_argument("--tolerance-sigma", dest="tolerance_sigma", type=float)
    s.add_argument("--format", choices=("json", "csv"))
    s.add_argument("--out")
    s.add_argument("--backend", choices=("cython", "python"))

    s = sub.add_parser("report", help="merge report files")
    s.add_argument("inputs", nargs="*")
    s.add_argument("--format", choices=("json", "csv"), default="json")
    s.add_argument("--out")
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "verify-sym":
            return cmd_verify_sym(args.k_max)
        if args.command == "verify-dual":
            return cmd_verify_dual(args.k_max)
        if args.command == "check":
            return cmd_check(resolve_check_config(args))
        return cmd_report(args.inputs, args.format, args.out)
    except UsageError as exc:
        print(f"efron-dual: error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # keep the exit-code contract total
        log.exception("unexpected failure")
        print(f"efron-dual: internal error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

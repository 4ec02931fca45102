"""Monte Carlo estimators and statistical checks of the moment identities.

Every estimator is a plain sample mean of i.i.d. per-replication values;
replication ``r`` always draws its points from stream ``(seed, r)``, and
the reduction runs over the full per-replication array with
:func:`math.fsum`, so results do not depend on chunking or worker count.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

import numpy as np

from . import __version__
from .duality import factorial_moment_sum, falling_factorial
from .errors import ContractViolation
from .geometry.bodies import ConvexBody
from .kernels import simulate
from .oracle import exact_interval_target
from .rng import derive_seed

IDENTITIES = ("efron-eq1", "product-eq2", "factorial-eq3", "dual-eq4", "thm2-direct-vs-ratio")
MODES = ("coupled", "independent")
DEFAULT_TOLERANCE_SIGMA = 4.0


@dataclass(frozen=True)
class MomentEstimate:
    mean: float
    stderr: float
    replications: int
    master_seed: int
    estimand: str

    @classmethod
    def from_samples(cls, samples: np.ndarray, seed: int, estimand: str) -> "MomentEstimate":
        x = np.asarray(samples, dtype=np.float64)
        r = len(x)
        mean = math.fsum(x.tolist()) / r
        if r > 1:
            var = math.fsum(((x - mean) ** 2).tolist()) / (r - 1)
            stderr = math.sqrt(var / r)
        else:
            stderr = 0.0
        return cls(mean, stderr, r, int(seed), estimand)

    def to_dict(self) -> dict:
        return {"mean": self.mean, "stderr": self.stderr, "reps": self.replications,
                "seed": self.master_seed, "estimand": self.estimand}

    @classmethod
    def from_dict(cls, d: dict) -> "MomentEstimate":
        return cls(float(d["mean"]), float(d["stderr"]), int(d["reps"]), int(d["seed"]), str(d["estimand"]))


def z_score(lhs: MomentEstimate, rhs: MomentEstimate) -> float:
    diff = abs(lhs.mean - rhs.mean)
    se = math.hypot(lhs.stderr, rhs.stderr)
    if se == 0.0:
        return 0.0 if diff == 0.0 else math.inf
    return diff / se


@dataclass(frozen=True)
class IdentityReport:
    """Both sides of one identity instance and the verdict at ``tolerance_sigma``."""

    identity: str
    body: str
    parameters: dict
    lhs: MomentEstimate
    rhs: MomentEstimate
    tolerance_sigma: float
    mode: str
    master_seed: int
    exact_target: Optional[Fraction] = None
    artifact_version: str = __version__
    paired_stderr: Optional[float] = None

    @property
    def paired_z_score(self) -> Optional[float]:
        """Discrepancy over the stderr of per-replication differences (coupled mode only).

        Diagnostic: ``z_score`` treats the two sides as independent, which is
        anti-conservative when a coupled draw correlates them negatively.
        """
        if self.paired_stderr is None:
            return None
        diff = abs(self.lhs.mean - self.rhs.mean)
        if self.paired_stderr == 0.0:
            return 0.0 if diff == 0.0 else math.inf
        return diff / self.paired_stderr

    @property
    def z_score(self) -> float:
        return z_score(self.lhs, self.rhs)

    @property
    def passed(self) -> bool:
        return self.z_score <= self.tolerance_sigma

    def to_dict(self) -> dict:
        return {
            "identity": self.identity,
            "body": self.body,
            "parameters": {key: self.parameters.get(key) for key in ("n", "k", "m", "j")},
            "lhs": self.lhs.to_dict(),
            "rhs": self.rhs.to_dict(),
            "z_score": self.z_score,
            "tolerance_sigma": self.tolerance_sigma,
            "pass": self.passed,
            "mode": self.mode,
            "paired_stderr": self.paired_stderr,
            "paired_z_score": self.paired_z_score,
            "master_seed": self.master_seed,
            "exact_target": None if self.exact_target is None else {
                "rational": str(self.exact_target), "value": float(self.exact_target)},
            "artifact_version": self.artifact_version,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "IdentityReport":
        target = d.get("exact_target")
        return cls(
            identity=d["identity"],
            body=d["body"],
            parameters={key: d["parameters"].get(key) for key in ("n", "k", "m", "j")},
            lhs=MomentEstimate.from_dict(d["lhs"]),
            rhs=MomentEstimate.from_dict(d["rhs"]),
            tolerance_sigma=float(d["tolerance_sigma"]),
            mode=d["mode"],
            master_seed=int(d["master_seed"]),
            exact_target=None if target is None else Fraction(target["rational"]),
            artifact_version=d["artifact_version"],
            paired_stderr=None if d.get("paired_stderr") is None else float(d["paired_stderr"]),
        )


# ---------------------------------------------------------------- helpers


def _table(top: int, f: Callable[[int], Fraction]) -> np.ndarray:
    """``f(N)`` as floats for ``N = 0..top``, each rounded once from the exact value."""
    return np.array([float(f(N)) for N in range(top + 1)], dtype=np.float64)


def _ratio(V: np.ndarray, body: ConvexBody) -> np.ndarray:
    return V / body.reference_volume


def _paired(a: np.ndarray, b: np.ndarray, seed: int) -> float:
    return MomentEstimate.from_samples(np.asarray(a, np.float64) - b, seed, "difference").stderr


def _check_common(reps: int, seed: int) -> None:
    if reps < 1:
        raise ContractViolation("reps must be positive")
    if not 0 <= seed < 1 << 64:
        raise ContractViolation("seed must be a 64-bit unsigned integer")


# ---------------------------------------------------------------- estimators


def estimate_volume_moment(body: ConvexBody, n: int, k: int, reps: int, seed: int,
                           workers: int = 1, backend: str | None = None) -> MomentEstimate:
    """``E V_n^k / (vol K)^k``: one hull per replication, its volume ratio raised to ``k``."""
    _check_common(reps, seed)
    if n < 1 or k < 0:
        raise ContractViolation("need n >= 1 and k >= 0")
    batch = simulate(body, n, [n], seed, reps, workers, backend)
    samples = _ratio(batch.volume(n), body) ** k
    return MomentEstimate.from_samples(samples, seed, f"E V_{n}^{k} / vol^{k}")


def estimate_factorial_moment(body: ConvexBody, m: int, j: int, reps: int, seed: int,
                              workers: int = 1, backend: str | None = None) -> MomentEstimate:
    """``E (N_m)_(j) / (m)_(j)``."""
    _check_common(reps, seed)
    if m < 1 or not 0 <= j <= m:
        raise ContractViolation("need m >= 1 and 0 <= j <= m")
    label = f"E(N_{m})_({j}) / ({m})_({j})"
    if j == 0:
        return MomentEstimate.from_samples(np.ones(reps), seed, label)
    batch = simulate(body, m, [m], seed, reps, workers, backend)
    table = _table(m, lambda N: Fraction(falling_factorial(N, j), falling_factorial(m, j)))
    return MomentEstimate.from_samples(table[batch.count(m)], seed, label)


def estimate_vertex_prob_direct(body: ConvexBody, m: int, j: int, reps: int, seed: int,
                                workers: int = 1, backend: str | None = None) -> MomentEstimate:
    """Frequency with which the first ``j`` of ``j + m`` points are all hull vertices.

    ``m = 0`` is accepted only for ``j <= d + 1``, where the answer is 1.
    """
    _check_common(reps, seed)
    if j < 1 or m < 0 or (m == 0 and j > body.dimension + 1):
        raise ContractViolation("need j >= 1 and m >= 1 (m = 0 only when j <= d + 1)")
    batch = simulate(body, j + m, [j + m], seed, reps, workers, backend)
    hits = (batch.lead >= j).astype(np.float64)
    return MomentEstimate.from_samples(hits, seed, f"P(first {j} of {j + m} are vertices)")


# ---------------------------------------------------------------- identities


def _validate(identity: str, mode: str, n: int, k: int, dim: int, tol: float) -> None:
    if identity not in IDENTITIES:
        raise ContractViolation(f"unknown identity {identity!r}; choose from {', '.join(IDENTITIES)}")
    if mode not in MODES:
        raise ContractViolation(f"mode must be one of {MODES}")
    if not tol > 0:
        raise ContractViolation("tolerance_sigma must be positive")
    if identity == "thm2-direct-vs-ratio":
        if k < 1 or n < 0 or (n == 0 and k > dim + 1):
            raise ContractViolation("need j >= 1 and m >= 1 (m = 0 only when j <= d + 1)")
        return
    if n < 1:
        raise ContractViolation("n must be positive")
    if identity == "efron-eq1":
        if k != 1:
            raise ContractViolation("efron-eq1 is the k = 1 case")
    elif k < 1:
        raise ContractViolation("k must be positive")


def check_identity(
    body: ConvexBody,
    identity: str,
    n: int | None = None,
    k: int | None = None,
    reps: int = 100_000,
    seed: int = 0,
    mode: str = "coupled",
    tolerance_sigma: float = DEFAULT_TOLERANCE_SIGMA,
    *,
    m: int | None = None,
    j: int | None = None,
    workers: int = 1,
    backend: str | None = None,
) -> IdentityReport:
    """Estimate both sides of ``identity`` and compare them by z-score.

    ``thm2-direct-vs-ratio`` takes ``m`` and ``j`` (``n``/``k`` are accepted
    as aliases); the others take ``n`` and ``k`` (``k`` defaults to 1).

    In coupled mode a replication draws one point set and evaluates both
    sides on it (volumes of prefixes, vertex count of the whole set).  In
    independent mode each side, and for ``dual-eq4`` each volume moment,
    gets its own stream derived from ``seed``.
    """
    _check_common(reps, seed)
    thm2 = identity == "thm2-direct-vs-ratio"
    if thm2:
        n, k = (m if m is not None else n), (j if j is not None else k)
    if k is None:
        k = 1
    if n is None:
        raise ContractViolation("n (or m) is required")
    _validate(identity, mode, n, k, body.dimension, tolerance_sigma)

    run = dict(reps=reps, workers=workers, backend=backend)
    sim = lambda npts, prefixes, s: simulate(body, npts, prefixes, s, reps, workers, backend)  # noqa: E731
    sub = lambda *tag: derive_seed(seed, identity, *tag)  # noqa: E731
    coupled = mode == "coupled"
    paired = None

    if identity == "efron-eq1":
        tab = _table(n + 1, lambda N: 1 - Fraction(N, n + 1))
        rl = f"1 - E N_{n + 1} / {n + 1}"
        if coupled:
            b = sim(n + 1, [n, n + 1], seed)
            xl, xr = _ratio(b.volume(n), body), tab[b.count(n + 1)]
            lhs = MomentEstimate.from_samples(xl, seed, f"E V_{n} / vol")
            rhs = MomentEstimate.from_samples(xr, seed, rl)
            paired = _paired(xl, xr, seed)
        else:
            lhs = estimate_volume_moment(body, n, 1, seed=sub("lhs"), **run)
            s = sub("rhs")
            rhs = MomentEstimate.from_samples(tab[sim(n + 1, [n + 1], s).count(n + 1)], s, rl)

    elif identity in ("product-eq2", "factorial-eq3"):
        if identity == "product-eq2":
            def f(N):
                out = Fraction(1)
                for i in range(1, k + 1):
                    out *= 1 - Fraction(N, n + i)
                return out
            rl = f"E prod_i (1 - N_{n + k} / ({n} + i))"
        else:
            f = lambda N: factorial_moment_sum(N, n, k)  # noqa: E731
            rl = f"sum_j (-1)^j C({k},j) E(N_{n + k})_(j) / ({n + k})_(j)"
        tab = _table(n + k, f)
        if coupled:
            b = sim(n + k, [n, n + k], seed)
            xl, xr = _ratio(b.volume(n), body) ** k, tab[b.count(n + k)]
            lhs = MomentEstimate.from_samples(xl, seed, f"E V_{n}^{k} / vol^{k}")
            rhs = MomentEstimate.from_samples(xr, seed, rl)
            paired = _paired(xl, xr, seed)
        else:
            lhs = estimate_volume_moment(body, n, k, seed=sub("lhs"), **run)
            s = sub("rhs")
            rhs = MomentEstimate.from_samples(tab[sim(n + k, [n + k], s).count(n + k)], s, rl)

    elif identity == "dual-eq4":
        total = n + k
        tab = _table(total, lambda N: Fraction(falling_factorial(N, k), falling_factorial(total, k)))
        ll = f"E(N_{total})_({k}) / ({total})_({k})"
        rl = f"sum_j (-1)^j C({k},j) E V_{{{total}-j}}^j / vol^j"
        coef = [(-1) ** jj * math.comb(k, jj) for jj in range(k + 1)]
        if coupled:
            b = sim(total, range(n, total + 1), seed)
            acc = np.full(reps, float(coef[0]))
            for jj in range(1, k + 1):
                acc = acc + coef[jj] * _ratio(b.volume(total - jj), body) ** jj
            lhs = MomentEstimate.from_samples(tab[b.count(total)], seed, ll)
            rhs = MomentEstimate.from_samples(acc, seed, rl)
            paired = _paired(tab[b.count(total)], acc, seed)
        else:
            s = sub("lhs")
            lhs = MomentEstimate.from_samples(tab[sim(total, [total], s).count(total)], s, ll)
            parts = [estimate_volume_moment(body, total - jj, jj, seed=sub("v", jj), **run)
                     for jj in range(1, k + 1)]
            mean = math.fsum([float(coef[0])] + [c * p.mean for c, p in zip(coef[1:], parts)])
            se = math.sqrt(math.fsum((c * p.stderr) ** 2 for c, p in zip(coef[1:], parts)))
            rhs = MomentEstimate(mean, se, reps, seed, rl)

    else:
        mm, jj = n, k
        total = mm + jj
        tab = _table(total, lambda N: Fraction(falling_factorial(N, jj), falling_factorial(total, jj)))
        ll = f"P(first {jj} of {total} are vertices)"
        rl = f"E(N_{total})_({jj}) / ({total})_({jj})"
        if coupled:
            b = sim(total, [total], seed)
            xl, xr = (b.lead >= jj).astype(np.float64), tab[b.count(total)]
            lhs = MomentEstimate.from_samples(xl, seed, ll)
            rhs = MomentEstimate.from_samples(xr, seed, rl)
            paired = _paired(xl, xr, seed)
        else:
            lhs = estimate_vertex_prob_direct(body, mm, jj, seed=sub("lhs"), **run)
            s = sub("rhs")
            rhs = MomentEstimate.from_samples(tab[sim(total, [total], s).count(total)], s, rl)

    params = {"m": n, "j": k} if thm2 else {"n": n, "k": k}
    target = exact_interval_target(identity, n, k) if body.dimension == 1 else None
    return IdentityReport(identity, body.name, params, lhs, rhs, float(tolerance_sigma), mode,
                          int(seed), target, paired_stderr=paired)

"""Backend selection and the batched replication driver.

The compiled ``_core`` extension is used when it imports; otherwise the
pure-Python ``_fallback``.  Set ``EFRON_DUAL_BACKEND=python`` to force
the fallback.  Both produce bit-identical results.
"""
from __future__ import annotations

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import _fallback
from .geometry.bodies import ConvexBody

log = logging.getLogger(__name__)

try:
    from . import _core as _compiled
except ImportError:  # extension not built
    _compiled = None

BACKENDS = {"python": _fallback}
if _compiled is not None:
    BACKENDS["cython"] = _compiled


def _default_backend_name() -> str:
    forced = os.environ.get("EFRON_DUAL_BACKEND", "").strip().lower()
    if forced:
        if forced not in BACKENDS:
            log.warning("backend %r unavailable, using %s", forced, next(reversed(BACKENDS)))
            return next(reversed(BACKENDS))
        return forced
    return "cython" if _compiled is not None else "python"


DEFAULT_BACKEND = _default_backend_name()
CHUNK = 1 << 16


def get_backend(name: str | None = None):
    return BACKENDS[name or DEFAULT_BACKEND]


@dataclass(frozen=True)
class Batch:
    """Per-replication hull statistics, in replication order."""

    prefixes: tuple[int, ...]
    volumes: np.ndarray  # (reps, len(prefixes))
    counts: np.ndarray  # (reps, len(prefixes))
    lead: np.ndarray  # (reps,)
    redone: int  # replications the compiled kernel handed back for exact treatment

    def volume(self, m: int) -> np.ndarray:
        return self.volumes[:, self.prefixes.index(m)]

    def count(self, m: int) -> np.ndarray:
        return self.counts[:, self.prefixes.index(m)]


def simulate(
    body: ConvexBody,
    npts: int,
    prefixes,
    seed: int,
    reps: int,
    workers: int = 1,
    backend: str | None = None,
) -> Batch:
    """Hulls of ``points[:m]`` for each ``m`` in ``prefixes`` over ``reps`` replications.

    Replication ``r`` uses stream ``(seed, r)``.  Work is split in fixed
    chunks and reassembled in order, so ``workers`` never changes the output.
    """
    prefixes = tuple(sorted({int(m) for m in prefixes}))
    if npts < 1 or reps < 1 or not prefixes or prefixes[0] < 1 or prefixes[-1] > npts:
        raise ValueError("need npts >= 1, reps >= 1 and 1 <= prefix <= npts")
    kern = get_backend(backend)
    params = np.asarray(body.params, dtype=np.float64)
    pre = np.asarray(prefixes, dtype=np.int64)
    bounds = [(a, min(reps, a + CHUNK)) for a in range(0, reps, CHUNK)]

    def run(span):
        return kern.simulate(body.code, params, body.dimension, npts, pre, seed, span[0], span[1])

    if workers > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, bounds))
    else:
        parts = [run(b) for b in bounds]
    vols = np.concatenate([p[0] for p in parts])
    counts = np.concatenate([p[1] for p in parts])
    lead = np.concatenate([p[2] for p in parts])
    flags = np.concatenate([p[3] for p in parts])
    bad = np.flatnonzero(flags)
    for r in bad:
        v, c, l, _ = _fallback.simulate(body.code, params, body.dimension, npts, pre, seed, int(r), int(r) + 1)
        vols[r], counts[r], lead[r] = v[0], c[0], l[0]
    if len(bad):
        log.debug("%d replications redone exactly", len(bad))
    return Batch(prefixes, vols, counts, lead, len(bad))

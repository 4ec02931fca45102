"""Counter-based random streams.

Stream ``(master_seed, stream_index)`` is Philox4x64-10 keyed with
``(master_seed, stream_index)`` and counter starting at zero, i.e. exactly
the word sequence of ``numpy.random.Philox(key=[master_seed, stream_index])``.
Streams for many replications are generated here in one vectorised pass;
the compiled kernel carries its own copy of the same function.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_M0 = np.uint64(0xD2E7470EE14C6C93)
_M1 = np.uint64(0xCA5A826395121157)
_W0 = np.uint64(0x9E3779B97F4A7C15)
_W1 = np.uint64(0xBB67AE8584CAA73B)
_LO32 = np.uint64(0xFFFFFFFF)
_S32 = np.uint64(32)
_S11 = np.uint64(11)
_S12 = np.uint64(12)
MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class RngStreamSpec:
    master_seed: int
    stream_index: int

    def __post_init__(self) -> None:
        for v in (self.master_seed, self.stream_index):
            if not 0 <= v <= MASK64:
                raise ValueError("seeds and stream indices are 64-bit unsigned integers")


def _mulhilo(a: np.uint64, b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    alo, ahi = a & _LO32, a >> _S32
    blo, bhi = b & _LO32, b >> _S32
    ll, lh, hl, hh = alo * blo, alo * bhi, ahi * blo, ahi * bhi
    mid = (ll >> _S32) + (lh & _LO32) + (hl & _LO32)
    return hh + (lh >> _S32) + (hl >> _S32) + (mid >> _S32), a * b


def philox4x64(counter: np.ndarray, key: np.ndarray) -> np.ndarray:
    """Philox4x64-10 block function, vectorised.

    ``counter`` has shape ``(..., 4)`` and ``key`` shape ``(..., 2)``
    (broadcastable); returns ``(..., 4)`` uint64 words.
    """
    counter = np.asarray(counter, dtype=np.uint64)
    key = np.asarray(key, dtype=np.uint64)
    c0, c1, c2, c3 = (counter[..., i] for i in range(4))
    k0, k1 = key[..., 0], key[..., 1]
    with np.errstate(over="ignore"):
        for r in range(10):
            if r:
                k0 = k0 + _W0
                k1 = k1 + _W1
            hi0, lo0 = _mulhilo(_M0, c0)
            hi1, lo1 = _mulhilo(_M1, c2)
            c0, c1, c2, c3 = hi1 ^ c1 ^ k0, lo1, hi0 ^ c3 ^ k1, lo0
    return np.stack(np.broadcast_arrays(c0, c1, c2, c3), axis=-1)


def stream_words(master_seed: int, first: int, stop: int, nwords: int) -> np.ndarray:
    """First ``nwords`` words of every stream ``first <= r < stop``; shape ``(stop-first, nwords)``."""
    nrep = stop - first
    nblocks = (nwords + 3) // 4
    ctr = np.zeros((nrep, nblocks, 4), dtype=np.uint64)
    ctr[..., 0] = np.arange(1, nblocks + 1, dtype=np.uint64)
    key = np.empty((nrep, 1, 2), dtype=np.uint64)
    key[..., 0] = np.uint64(master_seed)
    key[..., 1] = np.arange(first, stop, dtype=np.uint64)[:, None]
    return philox4x64(ctr, key).reshape(nrep, nblocks * 4)[:, :nwords]


def to_unit(words: np.ndarray) -> np.ndarray:
    """Uniforms on ``[0, 1)`` with 53 random bits (same map as numpy's ``random()``)."""
    return (words >> _S11).astype(np.float64) * 2.0**-53


def to_unit_open(words: np.ndarray) -> np.ndarray:
    """Uniforms on the open interval ``(0, 1)``, never exactly 0 or 1."""
    return ((words >> _S12).astype(np.float64) + 0.5) * 2.0**-52


def derive_seed(master_seed: int, *labels: int | str) -> int:
    """A 64-bit seed for a named sub-computation, reproducible from ``master_seed``."""
    spawn = tuple(
        lbl if isinstance(lbl, int) else int.from_bytes(lbl.encode(), "little") % (1 << 63)
        for lbl in labels
    )
    ss = np.random.SeedSequence(entropy=master_seed, spawn_key=spawn)
    return int(ss.generate_state(1, dtype=np.uint64)[0])

"""Pure-Python replication kernel.

Same contract and bit-for-bit the same results as the compiled
``_core`` module; used when the extension is not built, and to redo the
rare replications the compiled kernel cannot settle with floating-point
filters alone.
"""
from __future__ import annotations

import math

import numpy as np

from .geometry.bodies import BALL, CUBE, INTERVAL, POLYGON, SIMPLEX, words_per_point
from .geometry.hull import hull_indices
from .rng import stream_words, to_unit, to_unit_open

NAME = "python"
TWO_PI = 6.283185307179586
_KIND_NAMES = {INTERVAL: "interval", CUBE: "cube", SIMPLEX: "simplex", BALL: "ball", POLYGON: "polygon"}
_CHUNK = 4096


def _points(code: int, prm, dim: int, npts: int, u, uo) -> list[tuple]:
    """Map one replication's uniforms to points (``u`` on [0,1), ``uo`` on (0,1))."""
    pts = []
    w = 0
    if code == INTERVAL or code == CUBE:
        lo, side = prm[0], prm[1]
        for _ in range(npts):
            pts.append(tuple(lo + side * u[w + c] for c in range(dim)))
            w += dim
    elif code == SIMPLEX:
        nv = dim + 1
        for _ in range(npts):
            e = [-math.log(uo[w + i]) for i in range(nv)]
            w += nv
            s = 0.0
            for x in e:
                s += x
            coords = []
            for c in range(dim):
                acc = 0.0
                for i in range(nv):
                    acc += (e[i] / s) * prm[i * dim + c]
                coords.append(acc)
            pts.append(tuple(coords))
    elif code == BALL:
        r = prm[0]
        for _ in range(npts):
            if dim == 1:
                pts.append((r * (2.0 * u[w] - 1.0),))
            elif dim == 2:
                rho = r * math.sqrt(u[w])
                th = TWO_PI * u[w + 1]
                pts.append((rho * math.cos(th), rho * math.sin(th)))
            else:
                z = 2.0 * u[w] - 1.0
                ph = TWO_PI * u[w + 1]
                s = math.sqrt(max(0.0, 1.0 - z * z))
                rho = r * uo[w + 2] ** (1.0 / 3.0)
                pts.append((rho * s * math.cos(ph), rho * s * math.sin(ph), rho * z))
            w += dim
    else:
        m = int(prm[0])
        vx = prm[1 : 1 + 2 * m]
        cum = prm[1 + 2 * m : 1 + 2 * m + (m - 2)]
        total = cum[m - 3]
        for _ in range(npts):
            t = u[w] * total
            tri = m - 3
            for i in range(m - 2):
                if t < cum[i]:
                    tri = i
                    break
            a, b = u[w + 1], u[w + 2]
            if a + b > 1.0:
                a, b = 1.0 - a, 1.0 - b
            ax, ay = vx[0], vx[1]
            bx, by = vx[2 * (tri + 1)], vx[2 * (tri + 1) + 1]
            cx, cy = vx[2 * (tri + 2)], vx[2 * (tri + 2) + 1]
            pts.append((ax + a * (bx - ax) + b * (cx - ax), ay + a * (by - ay) + b * (cy - ay)))
            w += 3
    return pts


def _uniforms(code, dim, npts, seed, r0, r1):
    nwords = words_per_point(_KIND_NAMES[code], dim) * npts
    words = stream_words(seed, r0, r1, nwords)
    return to_unit(words).tolist(), to_unit_open(words).tolist()


def sample_points(code: int, params, dim: int, npts: int, seed: int, rep: int) -> np.ndarray:
    u, uo = _uniforms(code, dim, npts, seed, rep, rep + 1)
    return np.array(_points(code, list(params), dim, npts, u[0], uo[0]), dtype=np.float64)


def hull_points(points: np.ndarray):
    """``(volume, vertex_count, vertex_mask, flag)`` for one point set; never flags."""
    P = [tuple(p) for p in np.asarray(points, dtype=np.float64).tolist()]
    vol, verts = hull_indices(P, len(P[0]))
    mask = np.zeros(len(P), dtype=np.uint8)
    mask[verts] = 1
    return float(vol), len(verts), mask, 0


def simulate(code: int, params, dim: int, npts: int, prefixes, seed: int, r0: int, r1: int):
    """Run replications ``r0 <= r < r1``.

    For each replication, ``npts`` points are drawn from stream ``(seed, r)``
    and the hull of every prefix ``points[:m]``, ``m in prefixes``, is taken.
    Returns ``(volumes[R, P], counts[R, P], lead[R], flags[R])`` where
    ``lead`` is the length of the longest initial run of points that are
    vertices of the hull of all ``npts`` points.
    """
    prm = [float(x) for x in params]
    prefixes = [int(m) for m in prefixes]
    nrep = r1 - r0
    vols = np.zeros((nrep, len(prefixes)), dtype=np.float64)
    counts = np.zeros((nrep, len(prefixes)), dtype=np.int64)
    lead = np.zeros(nrep, dtype=np.int64)
    for c0 in range(r0, r1, _CHUNK):
        c1 = min(r1, c0 + _CHUNK)
        U, UO = _uniforms(code, dim, npts, seed, c0, c1)
        for row in range(c1 - c0):
            pts = _points(code, prm, dim, npts, U[row], UO[row])
            out = c0 - r0 + row
            full = None
            for col, m in enumerate(prefixes):
                vol, verts = hull_indices(pts[:m], dim)
                vols[out, col] = vol
                counts[out, col] = len(verts)
                if m == npts:
                    full = verts
            if full is None:
                _, full = hull_indices(pts, dim)
            fs = set(full)
            t = 0
            while t < npts and t in fs:
                t += 1
            lead[out] = t
    return vols, counts, lead, np.zeros(nrep, dtype=np.uint8)

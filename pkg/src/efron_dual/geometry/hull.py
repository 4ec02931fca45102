"""Convex hulls in dimensions 1-3 with exact extreme-point decisions.

Coordinates are floats, but every orientation sign is decided exactly:
a floating-point evaluation is accepted when it clears a static error
bound, otherwise the determinant is recomputed with :class:`Fraction`
(every finite float is an exact rational).  A point counts as a vertex
only if it is an extreme point; points on an edge or facet of the hull
of the others are not vertices.  Duplicate points keep their first
occurrence.

The 3-d routine first tries an incremental hull that assumes general
position and bails out with :class:`Degenerate` on any exact zero; the
fallback handles lower-dimensional and coplanar configurations by brute
force, which is fine for the small crafted inputs where it is needed.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from ..errors import ContractViolation

_EPS = 2.0**-53
CCW_BOUND = (3.0 + 16.0 * _EPS) * _EPS
O3D_BOUND = (7.0 + 56.0 * _EPS) * _EPS


class Degenerate(Exception):
    """Raised by the general-position fast path when an exact zero shows up."""


@dataclass(frozen=True)
class HullSummary:
    volume: float
    vertex_count: int
    vertex_indices: frozenset[int]


def orient2d(ax, ay, bx, by, cx, cy) -> int:
    """Sign of twice the signed area of ``abc`` (+1 counterclockwise)."""
    detleft = (ax - cx) * (by - cy)
    detright = (ay - cy) * (bx - cx)
    det = detleft - detright
    bound = CCW_BOUND * (abs(detleft) + abs(detright))
    if det > bound:
        return 1
    if -det > bound:
        return -1
    ax, ay, bx, by, cx, cy = map(Fraction, (ax, ay, bx, by, cx, cy))
    det = (ax - cx) * (by - cy) - (ay - cy) * (bx - cx)
    return (det > 0) - (det < 0)


def _det3(a, b, c, d):
    adx, ady, adz = a[0] - d[0], a[1] - d[1], a[2] - d[2]
    bdx, bdy, bdz = b[0] - d[0], b[1] - d[1], b[2] - d[2]
    cdx, cdy, cdz = c[0] - d[0], c[1] - d[1], c[2] - d[2]
    bdxcdy, cdxbdy = bdx * cdy, cdx * bdy
    cdxady, adxcdy = cdx * ady, adx * cdy
    adxbdy, bdxady = adx * bdy, bdx * ady
    det = adz * (bdxcdy - cdxbdy) + bdz * (cdxady - adxcdy) + cdz * (adxbdy - bdxady)
    perm = (
        (abs(bdxcdy) + abs(cdxbdy)) * abs(adz)
        + (abs(cdxady) + abs(adxcdy)) * abs(bdz)
        + (abs(adxbdy) + abs(bdxady)) * abs(cdz)
    )
    return det, perm


def orient3d(a, b, c, d) -> int:
    """Sign of ``det[a-d; b-d; c-d]``; an alternating function of the four points."""
    det, perm = _det3(a, b, c, d)
    bound = O3D_BOUND * perm
    if det > bound:
        return 1
    if -det > bound:
        return -1
    det, _ = _det3(*(tuple(map(Fraction, p)) for p in (a, b, c, d)))
    return (det > 0) - (det < 0)


def _collinear3(a, b, c) -> bool:
    return (
        orient2d(a[0], a[1], b[0], b[1], c[0], c[1]) == 0
        and orient2d(a[1], a[2], b[1], b[2], c[1], c[2]) == 0
        and orient2d(a[2], a[0], b[2], b[0], c[2], c[0]) == 0
    )


# ---------------------------------------------------------------- 1-d / 2-d


def hull1(xs: Sequence[float]) -> tuple[float, list[int]]:
    lo = hi = 0
    for i in range(1, len(xs)):
        if xs[i] < xs[lo]:
            lo = i
        if xs[i] > xs[hi]:
            hi = i
    return xs[hi] - xs[lo], [lo] if lo == hi else [lo, hi]


def hull2(pts: Sequence[tuple[float, float]]) -> tuple[float, list[int]]:
    """Monotone chain.  Returns the area and the hull vertices counterclockwise
    starting from the lexicographically smallest point."""
    order = sorted(range(len(pts)), key=lambda i: (pts[i][0], pts[i][1], i))
    uniq = []
    for i in order:
        if not uniq or pts[uniq[-1]] != pts[i]:
            uniq.append(i)
    if len(uniq) <= 2:
        return 0.0, uniq

    def chain(seq):
        out = []
        for i in seq:
            p = pts[i]
            while len(out) >= 2:
                a, b = pts[out[-2]], pts[out[-1]]
                if orient2d(a[0], a[1], b[0], b[1], p[0], p[1]) > 0:
                    break
                out.pop()
            out.append(i)
        return out

    hull = chain(uniq)[:-1] + chain(reversed(uniq))[:-1]
    x0, y0 = pts[hull[0]]
    acc = 0.0
    for i in range(1, len(hull) - 1):
        xi, yi = pts[hull[i]]
        xj, yj = pts[hull[i + 1]]
        acc += (xi - x0) * (yj - y0) - (yi - y0) * (xj - x0)
    return 0.5 * acc, hull


# ---------------------------------------------------------------- 3-d


def _initial_faces(s: int) -> list[tuple[int, int, int]]:
    # each face sees the opposite vertex on its positive (interior) side
    faces = [(0, 1, 2), (1, 0, 3), (0, 2, 3), (2, 1, 3)]
    return faces if s > 0 else [(b, a, c) for a, b, c in faces]


def hull3_fast(P: Sequence[tuple[float, float, float]]) -> tuple[float, list[int]]:
    """Incremental hull assuming general position; raises :class:`Degenerate` otherwise."""
    n = len(P)
    if n == 1:
        return 0.0, [0]
    if P[1] == P[0]:
        raise Degenerate
    if n == 2:
        return 0.0, [0, 1]
    if _collinear3(P[0], P[1], P[2]):
        raise Degenerate
    if n == 3:
        return 0.0, [0, 1, 2]
    s = orient3d(P[0], P[1], P[2], P[3])
    if s == 0:
        raise Degenerate
    faces = _initial_faces(s)
    for p in range(4, n):
        q = P[p]
        visible = []
        for a, b, c in faces:
            o = orient3d(P[a], P[b], P[c], q)
            if o == 0:
                raise Degenerate
            visible.append(o < 0)
        if not any(visible):
            continue
        vis_edges = set()
        for (a, b, c), v in zip(faces, visible):
            if v:
                vis_edges.update(((a, b), (b, c), (c, a)))
        keep, new = [], []
        for f, v in zip(faces, visible):
            if not v:
                keep.append(f)
                continue
            a, b, c = f
            for e0, e1 in ((a, b), (b, c), (c, a)):
                if (e1, e0) not in vis_edges:
                    new.append((e0, e1, p))
        starts = {}
        for f in new:
            if f[0] in starts:
                raise Degenerate
            starts[f[0]] = f
        for a, b, _ in new:
            g = starts.get(b)
            if g is None or orient3d(P[a], P[b], q, P[g[1]]) <= 0:
                raise Degenerate
        faces = keep + new
    r = P[0]
    acc = 0.0
    for a, b, c in faces:
        acc += _det3(P[a], P[b], P[c], r)[0]
    return acc / 6.0, sorted({i for f in faces for i in f})


def _cross(u, v):
    return (u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0])


def _sub(u, v):
    return (u[0] - v[0], u[1] - v[1], u[2] - v[2])


def _dot(u, v):
    return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]


def _rank(vectors) -> int:
    rows = [list(v) for v in vectors if any(v)]
    rank, col = 0, 0
    ncols = 3
    while rows and col < ncols:
        pivot = next((r for r in rows if r[col] != 0), None)
        if pivot is None:
            col += 1
            continue
        rows.remove(pivot)
        rows = [[x - r[col] / pivot[col] * y for x, y in zip(r, pivot)] for r in rows]
        rows = [r for r in rows if any(r)]
        rank += 1
        col += 1
    return rank


def _drop_axis(normal) -> tuple[int, int]:
    drop = next(i for i in range(3) if normal[i] != 0)
    return tuple(i for i in range(3) if i != drop)


def hull3_general(P: Sequence[tuple[float, float, float]]) -> tuple[Fraction, list[int]]:
    """Exact hull of arbitrary 3-d input: exact volume and extreme points.

    Costs ``O(n^4)``; intended for degenerate or small inputs only.
    """
    uniq = []
    seen = set()
    for i, p in enumerate(P):
        if p not in seen:
            seen.add(p)
            uniq.append(i)
    Q = {i: tuple(map(Fraction, P[i])) for i in uniq}
    p0 = uniq[0]
    if len(uniq) == 1:
        return Fraction(0), [p0]
    p1 = uniq[1]
    d01 = _sub(Q[p1], Q[p0])
    p2 = next((i for i in uniq[2:] if any(_cross(d01, _sub(Q[i], Q[p0])))), None)
    if p2 is None:
        axis = next(a for a in range(3) if d01[a] != 0)
        vol, verts = hull1([P[i][axis] for i in uniq])
        return Fraction(0), sorted(uniq[v] for v in verts)
    normal = _cross(d01, _sub(Q[p2], Q[p0]))
    p3 = next((i for i in uniq if _dot(normal, _sub(Q[i], Q[p0])) != 0), None)
    if p3 is None:
        ax = _drop_axis(normal)
        _, verts = hull2([(P[i][ax[0]], P[i][ax[1]]) for i in uniq])
        return Fraction(0), sorted(uniq[v] for v in verts)

    # supporting planes through non-collinear triples, outward normal
    planes: dict[tuple, tuple[tuple, list[int]]] = {}
    for i, j, l in combinations(uniq, 3):
        nrm = _cross(_sub(Q[j], Q[i]), _sub(Q[l], Q[i]))
        if not any(nrm):
            continue
        off = _dot(nrm, Q[i])
        side = [_dot(nrm, Q[m]) - off for m in uniq]
        if all(s <= 0 for s in side):
            sign = 1
        elif all(s >= 0 for s in side):
            sign = -1
        else:
            continue
        nrm = tuple(sign * x for x in nrm)
        off = sign * off
        lead = next(x for x in nrm if x != 0)
        key = tuple(x / abs(lead) for x in nrm) + (off / abs(lead),)
        if key not in planes:
            on = [m for m, s in zip(uniq, side) if s == 0]
            planes[key] = (nrm, on)

    verts = []
    for m in uniq:
        normals = [nrm for nrm, on in planes.values() if m in on]
        if len(normals) >= 3 and _rank(normals) == 3:
            verts.append(m)

    ref = Q[p0]
    vol = Fraction(0)
    for nrm, on in planes.values():
        ax = _drop_axis(nrm)
        _, ring = hull2([(P[m][ax[0]], P[m][ax[1]]) for m in on])
        ring = [on[v] for v in ring]
        face = Fraction(0)
        for t in range(1, len(ring) - 1):
            face += _det3(Q[ring[0]], Q[ring[t]], Q[ring[t + 1]], ref)[0]
        vol += abs(face)
    return vol / 6, sorted(verts)


# ---------------------------------------------------------------- public


def _as_tuples(points, dimension: int) -> list[tuple]:
    out = []
    for p in points:
        t = tuple(float(c) for c in (p if hasattr(p, "__len__") else (p,)))
        if len(t) != dimension:
            raise ContractViolation(f"point {p!r} does not have dimension {dimension}")
        out.append(t)
    if not out:
        raise ContractViolation("need at least one point")
    return out


def hull_indices(P: list[tuple], dimension: int) -> tuple[float, list[int]]:
    """Volume and vertex indices for already-validated tuples."""
    if dimension == 1:
        return hull1([p[0] for p in P])
    if dimension == 2:
        return hull2(P)
    try:
        return hull3_fast(P)
    except Degenerate:
        vol, verts = hull3_general(P)
        return float(vol), verts


def convex_hull(points, dimension: int) -> HullSummary:
    """Hull volume, vertex count and vertex indices of ``points`` in ``R^dimension``."""
    if dimension not in (1, 2, 3):
        raise ContractViolation("dimension must be 1, 2 or 3")
    P = _as_tuples(points, dimension)
    vol, verts = hull_indices(P, dimension)
    return HullSummary(float(vol), len(verts), frozenset(verts))


def hull_volume_exact(points, dimension: int) -> Fraction:
    """Exact hull volume, treating every float coordinate as a rational."""
    if dimension not in (1, 2, 3):
        raise ContractViolation("dimension must be 1, 2 or 3")
    P = _as_tuples(points, dimension)
    if dimension == 1:
        xs = [Fraction(p[0]) for p in P]
        return max(xs) - min(xs)
    if dimension == 2:
        _, ring = hull2(P)
        Q = [tuple(map(Fraction, P[i])) for i in ring]
        acc = Fraction(0)
        for i in range(1, len(Q) - 1):
            acc += (Q[i][0] - Q[0][0]) * (Q[i + 1][1] - Q[0][1]) - (Q[i][1] - Q[0][1]) * (Q[i + 1][0] - Q[0][0])
        return acc / 2
    return hull3_general(P)[0]

"""Sampleable convex bodies with closed-form reference volumes."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import ContractViolation

# Integer codes shared with the sampling kernels.
INTERVAL, CUBE, SIMPLEX, BALL, POLYGON = 0, 1, 2, 3, 4
KINDS = {"interval": INTERVAL, "cube": CUBE, "simplex": SIMPLEX, "ball": BALL, "polygon": POLYGON}

# Uniform words consumed per sampled point, by kind and dimension.
def words_per_point(kind: str, dim: int) -> int:
    if kind in ("interval", "cube"):
        return dim
    if kind == "simplex":
        return dim + 1
    if kind == "ball":
        return dim
    return 3  # polygon


def _shoelace(vertices: np.ndarray) -> float:
    x, y = vertices[:, 0], vertices[:, 1]
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


def ball_volume(dim: int, radius: float) -> float:
    return math.pi ** (dim / 2) / math.gamma(dim / 2 + 1) * radius**dim


@dataclass(frozen=True)
class ConvexBody:
    """A convex body ``K`` together with ``vol K``.

    Use the constructors (:meth:`interval`, :meth:`cube`, ...) rather than
    building instances by hand; they validate parameters and precompute
    what the samplers need.
    """

    kind: str
    dimension: int
    name: str
    vertices: tuple[tuple[float, ...], ...] = ()
    lo: float = 0.0
    width: float = 1.0  # interval length, cube side or ball radius
    reference_volume: float = field(default=0.0)
    params: tuple[float, ...] = field(default=(), repr=False)

    @classmethod
    def interval(cls, a: float = 0.0, b: float = 1.0, name: str | None = None) -> "ConvexBody":
        if not b > a:
            raise ContractViolation("interval needs a < b")
        return cls("interval", 1, name or f"interval:{a!r},{b!r}", lo=float(a), width=float(b - a),
                   reference_volume=float(b - a), params=(float(a), float(b - a)))

    @classmethod
    def cube(cls, dim: int, side: float = 1.0, name: str | None = None) -> "ConvexBody":
        if dim not in (1, 2, 3) or not side > 0:
            raise ContractViolation("cube needs dimension 1..3 and positive side")
        return cls("cube", dim, name or f"cube:{dim},{side!r}", width=float(side),
                   reference_volume=float(side) ** dim, params=(0.0, float(side)))

    @classmethod
    def ball(cls, dim: int, radius: float = 1.0, name: str | None = None) -> "ConvexBody":
        if dim not in (1, 2, 3) or not radius > 0:
            raise ContractViolation("ball needs dimension 1..3 and positive radius")
        return cls("ball", dim, name or f"ball:{dim},{radius!r}", width=float(radius),
                   reference_volume=ball_volume(dim, float(radius)), params=(float(radius),))

    @classmethod
    def simplex(cls, vertices, name: str | None = None) -> "ConvexBody":
        v = np.asarray(vertices, dtype=float)
        if v.ndim != 2 or v.shape[1] not in (1, 2, 3) or v.shape[0] != v.shape[1] + 1:
            raise ContractViolation("simplex needs d+1 vertices in dimension d (1..3)")
        d = v.shape[1]
        vol = abs(float(np.linalg.det(v[1:] - v[0]))) / math.factorial(d)
        if not vol > 0:
            raise ContractViolation("simplex is degenerate")
        verts = tuple(tuple(float(c) for c in row) for row in v)
        return cls("simplex", d, name or "simplex:" + ";".join(",".join(map(repr, r)) for r in verts),
                   vertices=verts, reference_volume=vol, params=tuple(float(c) for c in v.ravel()))

    @classmethod
    def polygon(cls, vertices, name: str | None = None) -> "ConvexBody":
        v = np.asarray(vertices, dtype=float)
        if v.ndim != 2 or v.shape[1] != 2 or v.shape[0] < 3:
            raise ContractViolation("polygon needs at least 3 planar vertices")
        m = len(v)
        for i in range(m):
            a, b, c = v[i], v[(i + 1) % m], v[(i + 2) % m]
            if (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]) <= 0:
                raise ContractViolation("polygon vertices must be strictly convex and counterclockwise")
        # fan triangles from vertex 0, cumulative areas for area-weighted choice
        areas = [
            0.5 * ((v[i][0] - v[0][0]) * (v[i + 1][1] - v[0][1]) - (v[i][1] - v[0][1]) * (v[i + 1][0] - v[0][0]))
            for i in range(1, m - 1)
        ]
        cum = list(np.cumsum(areas))
        verts = tuple(tuple(float(c) for c in row) for row in v)
        return cls("polygon", 2, name or "polygon:" + ";".join(",".join(map(repr, r)) for r in verts),
                   vertices=verts, reference_volume=abs(_shoelace(v)),
                   params=(float(m),) + tuple(float(c) for c in v.ravel()) + tuple(float(c) for c in cum))

    @property
    def code(self) -> int:
        return KINDS[self.kind]

    @property
    def words_per_point(self) -> int:
        return words_per_point(self.kind, self.dimension)

    def contains(self, point, tol: float = 1e-12) -> bool:
        """Membership test with absolute slack ``tol`` (scaled by the body size)."""
        p = np.asarray(point, dtype=float).reshape(-1)
        if p.shape[0] != self.dimension or not np.all(np.isfinite(p)):
            return False
        if self.kind in ("interval", "cube"):
            s = tol * max(1.0, self.width)
            return bool(np.all(p >= self.lo - s) and np.all(p <= self.lo + self.width + s))
        if self.kind == "ball":
            return bool(np.linalg.norm(p) <= self.width * (1 + tol))
        v = np.asarray(self.vertices)
        if self.kind == "simplex":
            lam = np.linalg.solve((v[1:] - v[0]).T, p - v[0])
            bary = np.concatenate([[1 - lam.sum()], lam])
            return bool(np.all(bary >= -tol))
        m = len(v)
        scale = max(1.0, float(np.max(np.abs(v))))
        for i in range(m):
            a, b = v[i], v[(i + 1) % m]
            cross = (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0])
            if cross < -tol * scale * scale:
                return False
        return True


PRESETS = {
    "interval": lambda: ConvexBody.interval(0.0, 1.0, name="interval"),
    "segment": lambda: ConvexBody.interval(0.0, 1.0, name="segment"),
    "triangle": lambda: ConvexBody.simplex([(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)], name="triangle"),
    "square": lambda: ConvexBody.cube(2, 1.0, name="square"),
    "cube3": lambda: ConvexBody.cube(3, 1.0, name="cube3"),
    "disk": lambda: ConvexBody.ball(2, 1.0, name="disk"),
    "ball3": lambda: ConvexBody.ball(3, 1.0, name="ball3"),
    "tetrahedron": lambda: ConvexBody.simplex(
        [(0.0, 0.0, 0.0), (1.0, 0.0, 0.0), (0.0, 1.0, 0.0), (0.0, 0.0, 1.0)], name="tetrahedron"
    ),
    "hexagon": lambda: ConvexBody.polygon(
        [(math.cos(i * math.pi / 3), math.sin(i * math.pi / 3)) for i in range(6)], name="hexagon"
    ),
}


def _floats(text: str) -> list[float]:
    return [float(t) for t in text.split(",") if t.strip()]


def parse_body(spec: str) -> ConvexBody:
    """Build a body from a preset name or ``kind:params``.

    Forms: ``interval:a,b``, ``cube:d,side``, ``ball:d,radius``,
    ``simplex:x,y;x,y;x,y`` and ``polygon:x,y;x,y;...``.
    """
    spec = spec.strip()
    if spec in PRESETS:
        return PRESETS[spec]()
    kind, _, rest = spec.partition(":")
    try:
        if kind == "interval":
            a, b = _floats(rest)
            return ConvexBody.interval(a, b)
        if kind == "cube":
            d, side = _floats(rest)
            return ConvexBody.cube(int(d), side)
        if kind == "ball":
            d, radius = _floats(rest)
            return ConvexBody.ball(int(d), radius)
        if kind in ("simplex", "polygon"):
            verts = [_floats(chunk) for chunk in rest.split(";") if chunk.strip()]
            return ConvexBody.simplex(verts) if kind == "simplex" else ConvexBody.polygon(verts)
    except (ValueError, np.linalg.LinAlgError) as exc:
        raise ContractViolation(f"bad body spec {spec!r}: {exc}") from exc
    raise ContractViolation(f"unknown body {spec!r}; presets: {', '.join(sorted(PRESETS))}")


def reference_volume(body: ConvexBody) -> float:
    return body.reference_volume

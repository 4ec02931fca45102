"""Independent ground truth: closed forms in one dimension, exact expectations
over finite laws, and a registry of planar constants."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from typing import Callable, Sequence, Union

import numpy as np

from .duality import DiscreteLaw, _check_law

PROVENANCES = ("closed-form", "brute-force", "numerical-integration", "high-rep-simulation")
REGISTRY_FILE = "planar_reference.tsv"


@dataclass(frozen=True)
class OracleValue:
    label: str
    value: Union[Fraction, float]
    provenance: str
    detail: str

    def __post_init__(self) -> None:
        if self.provenance not in PROVENANCES:
            raise ValueError(f"unknown provenance {self.provenance!r}")

    @property
    def exact(self) -> bool:
        return self.provenance in ("closed-form", "brute-force") and isinstance(self.value, Fraction)


def interval_volume_moment(n: int, k: int) -> Fraction:
    """``E[R^k]`` for the range ``R`` of ``n`` iid uniforms on ``[0, 1]``.

    ``R ~ Beta(n-1, 2)``, so ``E[R^k] = prod_{i<k} (n-1+i)/(n+1+i)``.
    """
    if n < 1 or k < 0:
        raise ValueError("need n >= 1 and k >= 0")
    if k == 0:
        return Fraction(1)
    if n == 1:
        return Fraction(0)
    out = Fraction(1)
    for i in range(k):
        out *= Fraction(n - 1 + i, n + 1 + i)
    return out


def interval_vertex_law(m: int) -> DiscreteLaw:
    """Vertex count of ``m`` distinct points on a line: 1 for ``m = 1``, else 2."""
    if m < 1:
        raise ValueError("m must be positive")
    return DiscreteLaw.point_mass(1 if m == 1 else 2)


def brute_force_expectation(law: DiscreteLaw, f: Callable[[int], Union[int, Fraction]]) -> Fraction:
    _check_law(law)
    return sum((p * Fraction(f(s)) for s, p in zip(law.support, law.probabilities)), Fraction(0))


# ---------------------------------------------------------------- quadrature


def _positive_part(f1, f2, f3, area):
    """``integral of max(f, 0)`` over a triangle where the linear ``f`` takes values f1, f2, f3."""
    s = -np.sort(-np.stack([f1, f2, f3]), axis=0)
    s1, s2, s3 = s[0], s[1], s[2]
    full = area * (s1 + s2 + s3) / 3.0
    with np.errstate(divide="ignore", invalid="ignore"):
        one = area * s1**3 / (3.0 * (s1 - s2) * (s1 - s3))
        two = full + area * (-s3) ** 3 / (3.0 * (s1 - s3) * (s2 - s3))
    return np.where(s3 >= 0, full, np.where(s1 <= 0, 0.0, np.where(s2 <= 0, one, two)))


def _fan(vertices: np.ndarray) -> list[tuple[np.ndarray, np.ndarray, np.ndarray]]:
    return [(vertices[0], vertices[i], vertices[i + 1]) for i in range(1, len(vertices) - 1)]


def _tri_area(a, b, c) -> float:
    return 0.5 * abs((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]))


def _collapsed_rule(a, b, c, order: int):
    """Gauss-Legendre points on a triangle via the collapsed (Duffy) square map."""
    x, w = np.polynomial.legendre.leggauss(order)
    x, w = 0.5 * (x + 1.0), 0.5 * w
    u, v = np.meshgrid(x, x, indexing="ij")
    wu, wv = np.meshgrid(w, w, indexing="ij")
    u, v, wt = u.ravel(), v.ravel(), (wu * wv).ravel()
    pts = a + u[:, None] * (b - a) + (u * v)[:, None] * (c - b)
    return pts, wt * u * 2.0 * _tri_area(a, b, c)


def mean_triangle_area_ratio(vertices: Sequence[Sequence[float]], order: int = 16) -> float:
    """``E[area(conv{x1, x2, x3})] / area(K)`` for uniform points in the convex polygon ``K``.

    The innermost integral over ``x3`` is done in closed form (integral of
    the absolute value of a linear function over each fan triangle); the
    remaining four-dimensional integral uses a tensor Gauss-Legendre rule
    of the given order on each fan triangle.  Deterministic.
    """
    V = np.asarray(vertices, dtype=float)
    fan = _fan(V)
    rules = [_collapsed_rule(a, b, c, order) for a, b, c in fan]
    X = np.concatenate([r[0] for r in rules])
    W = np.concatenate([r[1] for r in rules])
    area = sum(_tri_area(*t) for t in fan)
    total = 0.0
    for i in range(len(X)):
        a, wa = X[i], W[i]
        dx = X[:, 0] - a[0]
        dy = X[:, 1] - a[1]
        inner = np.zeros(len(X))
        for t0, t1, t2 in fan:
            # cross(b - a, c - a) at the three corners of the fan triangle
            vals = [dx * (t[1] - a[1]) - dy * (t[0] - a[0]) for t in (t0, t1, t2)]
            tarea = _tri_area(t0, t1, t2)
            inner += 2.0 * _positive_part(*vals, tarea) - tarea * (vals[0] + vals[1] + vals[2]) / 3.0
        total += wa * float(np.dot(W, inner))
    return float(0.5 * total / area**4)


def extrapolated_triangle_area_ratio(vertices, orders: tuple[int, int, int] = (32, 48, 64)) -> tuple[float, float, float]:
    """Richardson-extrapolated :func:`mean_triangle_area_ratio`.

    The kink of ``|cross|`` limits the rule to algebraic convergence
    ``c * order**-p``; ``p`` is fitted from three orders.  Returns
    ``(value, error_estimate, p)`` where the error estimate is the size of
    the extrapolation step from the highest order.
    """
    o1, o2, o3 = orders
    f1, f2, f3 = (mean_triangle_area_ratio(vertices, o) for o in orders)
    ratio = (f2 - f1) / (f3 - f2)

    def g(p):
        return (o1**-p - o2**-p) / (o2**-p - o3**-p) - ratio

    lo, hi = 0.5, 12.0
    if g(lo) * g(hi) > 0:
        raise ArithmeticError("quadrature sequence is not in its asymptotic regime")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if g(lo) * g(mid) <= 0:
            hi = mid
        else:
            lo = mid
    p = 0.5 * (lo + hi)
    value = f3 + (f3 - f2) * o2**p / (o3**p - o2**p)
    return float(value), float(abs(value - f3)), float(p)


# ---------------------------------------------------------------- registry


def _parse_value(text: str) -> Union[Fraction, float]:
    return Fraction(text) if "/" in text else float(text)


def load_registry(path=None) -> dict[tuple[str, str], OracleValue]:
    if path is None:
        text = resources.files("efron_dual.data").joinpath(REGISTRY_FILE).read_text(encoding="utf-8")
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    out = {}
    for line in text.splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        key, value, provenance, detail = line.split("\t")
        body, _, quantity = key.partition("/")
        out[(body, quantity)] = OracleValue(key, _parse_value(value), provenance, detail)
    return out


_REGISTRY: dict[tuple[str, str], OracleValue] | None = None


def planar_reference(body_label: str, quantity_label: str) -> OracleValue:
    """Look up a registered constant, e.g. ``planar_reference("triangle", "EV3/vol")``."""
    global _REGISTRY
    if _REGISTRY is None:
        _REGISTRY = load_registry()
    try:
        return _REGISTRY[(body_label, quantity_label)]
    except KeyError:
        raise LookupError(f"no registered value for {body_label}/{quantity_label}") from None


def format_registry(entries: Sequence[OracleValue], version: int = 1) -> str:
    lines = [f"# planar reference registry v{version}", "# key\tvalue\tprovenance\tdetail"]
    for e in entries:
        lines.append("\t".join((e.label, str(e.value) if isinstance(e.value, Fraction) else repr(e.value), e.provenance, e.detail)))
    return "\n".join(lines) + "\n"


def exact_interval_target(identity: str, n: int, k: int) -> Fraction | None:
    """Closed-form value both sides should share for a one-dimensional body."""
    if identity in ("efron-eq1", "product-eq2", "factorial-eq3"):
        return interval_volume_moment(n, 1 if identity == "efron-eq1" else k)
    if identity == "dual-eq4":
        law = interval_vertex_law(n + k)
        return law.expect(lambda N: math.perm(N, k)) / math.perm(n + k, k)
    if identity == "thm2-direct-vs-ratio":
        m, j = n, k
        law = interval_vertex_law(m + j)
        return law.expect(lambda N: math.perm(N, j)) / math.perm(m + j, j)
    return None

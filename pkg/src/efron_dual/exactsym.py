"""Exact elementary symmetric polynomials over the rationals.

Values are :class:`fractions.Fraction` (always in lowest terms with a
positive denominator).  Polynomials are dense, immutable coefficient
tuples, lowest degree first.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

Rational = Union[int, Fraction]


def _q(value: Rational) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError(f"expected an int or Fraction, got {type(value).__name__}")


@dataclass(frozen=True)
class ExactPoly:
    """Univariate polynomial with exact rational coefficients.

    ``coeffs[i]`` is the coefficient of ``x**i``.  Trailing zeros are
    stripped on construction, so the zero polynomial has ``coeffs == ()``
    and equality is plain tuple equality.
    """

    coeffs: tuple[Fraction, ...] = ()

    def __post_init__(self) -> None:
        cs = [_q(c) for c in self.coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def const(cls, c: Rational) -> "ExactPoly":
        return cls((c,))

    @classmethod
    def linear(cls, c0: Rational, c1: Rational) -> "ExactPoly":
        """The polynomial ``c0 + c1*x``."""
        return cls((c0, c1))

    @property
    def degree(self) -> int:
        """Degree, with ``-1`` for the zero polynomial."""
        return len(self.coeffs) - 1

    def coeff(self, i: int) -> Fraction:
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return Fraction(0)

    def __add__(self, other: "ExactPoly") -> "ExactPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        return ExactPoly(tuple(self.coeff(i) + other.coeff(i) for i in range(n)))

    def __sub__(self, other: "ExactPoly") -> "ExactPoly":
        return self + other.scale(-1)

    def __mul__(self, other: "ExactPoly") -> "ExactPoly":
        if not self.coeffs or not other.coeffs:
            return ExactPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return ExactPoly(tuple(out))

    def scale(self, c: Rational) -> "ExactPoly":
        c = _q(c)
        return ExactPoly(tuple(c * a for a in self.coeffs))

    def __call__(self, x: Rational) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if mono and c == 1:
                terms.append(mono)
            elif mono and c == -1:
                terms.append("-" + mono)
            else:
                terms.append(f"{c}{'*' + mono if mono else ''}")
        return " + ".join(terms).replace("+ -", "- ")


ONE = ExactPoly.const(1)
ZERO = ExactPoly()


def elem_sym(values: Sequence[Rational], j: int) -> Fraction:
    """Return ``sigma_j(values)``.

    Follows the usual conventions: ``sigma_0 = 1`` for any sequence
    (including the empty one) and ``sigma_j = 0`` when ``j < 0`` or
    ``j > len(values)``.  Evaluated with the one-variable-at-a-time
    recurrence, so the cost is ``O(len(values) * j)``.
    """
    k = len(values)
    if j == 0:
        return Fraction(1)
    if j < 0 or j > k:
        return Fraction(0)
    # row[i] holds sigma_i of the values consumed so far
    row = [Fraction(1)] + [Fraction(0)] * j
    for m, x in enumerate(values, start=1):
        x = _q(x)
        for i in range(min(m, j), 0, -1):
            row[i] = x * row[i - 1] + row[i]
    return row[j]


def shifted_sigma_poly(k: int, j: int) -> ExactPoly:
    """``sigma_j(x+1, ..., x+k)`` expanded as a polynomial in ``x``.

    Built by adding the variables ``x+1, x+2, ...`` one at a time with
    ``sigma_j(.., x+m) = (x+m) * sigma_{j-1}(..) + sigma_j(..)``.
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    if j == 0:
        return ONE
    if j < 0 or j > k:
        return ZERO
    row = [ONE] + [ZERO] * j
    for m in range(1, k + 1):
        var = ExactPoly.linear(m, 1)
        for i in range(min(m, j), 0, -1):
            row[i] = var * row[i - 1] + row[i]
    return row[j]


def proposition_rhs(k: int, j: int) -> ExactPoly:
    """Decomposed form of ``sigma_j(x+1, ..., x+k)``.

    Returns ``sum_{i=0}^{j} C(k, i) * sigma_{j-i}(1, ..., k-i-1) *
    sigma_i(x+1, ..., x+i)``, where the integer range ``1..k-i-1`` is
    empty whenever ``k - i - 1 <= 0``.
    """
    if k < 0 or j < 0:
        raise ValueError("k and j must be nonnegative")
    total = ZERO
    for i in range(j + 1):
        c = math.comb(k, i)
        if c == 0:
            continue
        s = elem_sym(range(1, max(k - i - 1, 0) + 1), j - i)
        if s == 0:
            continue
        total = total + shifted_sigma_poly(i, i).scale(c * s)
    return total


def gen_poly(values: Sequence[Rational]) -> ExactPoly:
    """``prod (t - x_i)`` as a polynomial in ``t``."""
    out = ONE
    for x in values:
        out = out * ExactPoly.linear(-_q(x), 1)
    return out


@dataclass(frozen=True)
class PropositionCheck:
    k: int
    j: int
    passed: bool


def verify_proposition(k_max: int) -> list[PropositionCheck]:
    """Compare both sides of the decomposition for all ``0 <= j <= k <= k_max``.

    Mismatches are reported in the returned list, never raised.
    """
    if k_max < 1:
        raise ValueError("k_max must be at least 1")
    report = []
    for k in range(k_max + 1):
        for j in range(k + 1):
            ok = shifted_sigma_poly(k, j) == proposition_rhs(k, j)
            report.append(PropositionCheck(k, j, ok))
    return report


def check_recurrence(values: Sequence[Rational]) -> bool:
    """One step of the sigma recurrence, for every ``0 <= j <= len(values)``."""
    if not values:
        return elem_sym(values, 0) == 1
    head, last = list(values[:-1]), _q(values[-1])
    return all(
        elem_sym(values, j) == last * elem_sym(head, j - 1) + elem_sym(head, j)
        for j in range(len(values) + 1)
    )


def check_gen_poly(values: Sequence[Rational]) -> bool:
    """Coefficient of ``t**(k-j)`` in ``gen_poly`` is ``(-1)**j sigma_j``."""
    k = len(values)
    p = gen_poly(values)
    return p.degree == k and all(
        p.coeff(k - j) == (-1) ** j * elem_sym(values, j) for j in range(k + 1)
    )


def as_fractions(values: Iterable[Rational]) -> list[Fraction]:
    return [_q(v) for v in values]

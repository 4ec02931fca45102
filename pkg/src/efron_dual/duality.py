"""Binomial involution linking volume moments and vertex factorial moments.

Everything here is exact (Python ints and Fractions) unless a
:class:`MomentVector` is built from floats, in which case the transform
is carried out in floating point.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Callable, Sequence, Union

from .errors import ContractViolation

Number = Union[int, float, Fraction]


def falling_factorial(a: int, j: int) -> int:
    """``a (a-1) ... (a-j+1)``; 1 for ``j == 0`` and 0 once a factor hits 0."""
    if j < 0:
        raise ValueError("j must be nonnegative")
    out = 1
    for i in range(j):
        out *= a - i
        if out == 0:
            return 0
    return out


@dataclass(frozen=True)
class IntMatrix:
    rows: tuple[tuple[int, ...], ...]

    @property
    def order(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.rows[i][j]

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        n = self.order
        if other.order != n:
            raise ContractViolation("matrix orders differ")
        cols = list(zip(*other.rows))
        return IntMatrix(
            tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in cols) for row in self.rows)
        )

    def apply(self, vec: Sequence[Number]) -> list[Number]:
        if len(vec) != self.order:
            raise ContractViolation(f"vector length {len(vec)} != matrix order {self.order}")
        out = []
        for row in self.rows:
            acc: Number = 0
            for a, x in zip(row, vec):
                if a:
                    acc = acc + a * x
            out.append(acc)
        return out

    def is_identity(self) -> bool:
        return all(
            v == (1 if i == j else 0) for i, row in enumerate(self.rows) for j, v in enumerate(row)
        )


def matrix_A(k: int) -> IntMatrix:
    """The ``(k+1) x (k+1)`` lower-triangular matrix ``((-1)**j * C(i, j))``."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    return IntMatrix(
        tuple(tuple((-1) ** j * math.comb(i, j) for j in range(k + 1)) for i in range(k + 1))
    )


def verify_involution(k: int) -> bool:
    a = matrix_A(k)
    return (a @ a).is_identity()


class MomentKind(str, Enum):
    VOLUME = "volume-side"
    VERTEX = "vertex-side"

    def flipped(self) -> "MomentKind":
        return MomentKind.VERTEX if self is MomentKind.VOLUME else MomentKind.VOLUME


@dataclass(frozen=True)
class MomentVector:
    """Normalised moment vector of length ``k + 1``.

    Volume side: ``(1, EV_{n+k-1}/vol, EV^2_{n+k-2}/vol^2, ..., EV^k_n/vol^k)``.
    Vertex side: ``(1, EN_{n+k}/(n+k), ..., E(N_{n+k})_(k)/(n+k)_(k))``.
    """

    kind: MomentKind
    entries: tuple[Number, ...]
    n: int
    k: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "entries", tuple(self.entries))
        object.__setattr__(self, "kind", MomentKind(self.kind))
        if self.k < 0 or self.n < 1:
            raise ContractViolation("need n >= 1 and k >= 0")
        if len(self.entries) != self.k + 1:
            raise ContractViolation(
                f"expected {self.k + 1} entries for k={self.k}, got {len(self.entries)}"
            )
        if self.entries[0] != 1:
            raise ContractViolation("entry 0 of a moment vector must be 1")


def transform(vec: MomentVector) -> MomentVector:
    """Multiply by ``A_k``; switches volume side <-> vertex side."""
    if len(vec.entries) != vec.k + 1:
        raise ContractViolation("length does not match declared k")
    out = matrix_A(vec.k).apply(vec.entries)
    return MomentVector(vec.kind.flipped(), tuple(out), vec.n, vec.k)


def eq2_eq3_pointwise(N: int, n: int, k: int) -> tuple[Fraction, Fraction]:
    """Both integrands of the moment identity, evaluated at a fixed vertex count ``N``.

    ``lhs = prod_{i=1}^{k} (1 - N/(n+i))`` and
    ``rhs = sum_j (-1)^j C(k, j) (N)_(j) / (n+k)_(j)``.
    """
    lhs = Fraction(1)
    for i in range(1, k + 1):
        lhs *= 1 - Fraction(N, n + i)
    return lhs, factorial_moment_sum(N, n, k)


def factorial_moment_sum(N: int, n: int, k: int) -> Fraction:
    return sum(
        (
            Fraction((-1) ** j * math.comb(k, j) * falling_factorial(N, j), falling_factorial(n + k, j))
            for j in range(k + 1)
        ),
        Fraction(0),
    )


@dataclass(frozen=True)
class DiscreteLaw:
    """Finitely supported law of a nonnegative integer random variable."""

    support: tuple[int, ...]
    probabilities: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        support = tuple(int(s) for s in self.support)
        probs = tuple(Fraction(p) for p in self.probabilities)
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "probabilities", probs)
        if len(support) != len(probs) or not support:
            raise ContractViolation("support and probabilities must be nonempty and equal length")
        if any(s < 0 for s in support):
            raise ContractViolation("support must be nonnegative")
        if any(b <= a for a, b in zip(support, support[1:])):
            raise ContractViolation("support must be strictly increasing")
        if any(p < 0 for p in probs):
            raise ContractViolation("probabilities must be nonnegative")
        if sum(probs) != 1:
            raise ContractViolation(f"probabilities sum to {sum(probs)}, not 1")

    @classmethod
    def point_mass(cls, value: int) -> "DiscreteLaw":
        return cls((value,), (Fraction(1),))

    @classmethod
    def uniform(cls, values: Sequence[int]) -> "DiscreteLaw":
        values = sorted(values)
        return cls(tuple(values), tuple(Fraction(1, len(values)) for _ in values))

    def expect(self, f: Callable[[int], Number]) -> Fraction:
        return sum((p * Fraction(f(s)) for s, p in zip(self.support, self.probabilities)), Fraction(0))


@dataclass(frozen=True)
class ExactIdentityReport:
    """Exact-mode outcome of one identity instance; ``passed`` means ``lhs == rhs``."""

    identity: str
    n: int
    k: int
    lhs: Fraction
    rhs: Fraction

    @property
    def passed(self) -> bool:
        return self.lhs == self.rhs

    def to_dict(self) -> dict:
        return {
            "identity": self.identity,
            "parameters": {"n": self.n, "k": self.k},
            "lhs": str(self.lhs),
            "rhs": str(self.rhs),
            "pass": self.passed,
        }


def _check_law(law: DiscreteLaw) -> None:
    if not isinstance(law, DiscreteLaw):
        raise ContractViolation("expected a DiscreteLaw")
    if sum(law.probabilities) != 1:
        raise ContractViolation("law probabilities do not sum to 1")


def vertex_ratio(law: DiscreteLaw, total: int, j: int) -> Fraction:
    """``E(N)_(j) / (total)_(j)`` under ``law``."""
    return law.expect(lambda N: falling_factorial(N, j)) / falling_factorial(total, j)


def expect_identity_eq3(law: DiscreteLaw, n: int, k: int, vmoment: Fraction) -> ExactIdentityReport:
    """Factorial-moment side of the k-th volume moment, exactly, under ``law`` for ``N_{n+k}``."""
    _check_law(law)
    if n < 1 or k < 1:
        raise ContractViolation("need n >= 1 and k >= 1")
    rhs = sum(
        ((-1) ** j * math.comb(k, j) * vertex_ratio(law, n + k, j) for j in range(k + 1)),
        Fraction(0),
    )
    return ExactIdentityReport("factorial-eq3", n, k, Fraction(vmoment), rhs)


def expect_identity_eq4(
    law: DiscreteLaw, n: int, k: int, vmoments: Sequence[Fraction]
) -> ExactIdentityReport:
    """Dual form: ``E(N_{n+k})_(k)/(n+k)_(k)`` against the alternating volume sum.

    ``vmoments[j]`` must hold ``E V^j_{n+k-j} / vol^j`` for ``j = 0..k``.
    """
    _check_law(law)
    if n < 1 or k < 1:
        raise ContractViolation("need n >= 1 and k >= 1")
    if len(vmoments) != k + 1:
        raise ContractViolation("need k + 1 volume moments")
    lhs = vertex_ratio(law, n + k, k)
    rhs = sum(
        ((-1) ** j * math.comb(k, j) * Fraction(vmoments[j]) for j in range(k + 1)), Fraction(0)
    )
    return ExactIdentityReport("dual-eq4", n, k, lhs, rhs)


def inclusion_exclusion_check(law: DiscreteLaw, n: int, k: int) -> bool:
    """Complement of "at least one of k marked points is a vertex" equals the full alternating sum."""
    _check_law(law)
    if n < 1 or k < 1:
        raise ContractViolation("need n >= 1 and k >= 1")
    ratios = [vertex_ratio(law, n + k, j) for j in range(k + 1)]
    at_least_one = sum(
        ((-1) ** (j - 1) * math.comb(k, j) * ratios[j] for j in range(1, k + 1)), Fraction(0)
    )
    full = sum(((-1) ** j * math.comb(k, j) * ratios[j] for j in range(k + 1)), Fraction(0))
    return 1 - at_least_one == full


def volume_vector_from_moments(moments: Sequence[Number], n: int) -> MomentVector:
    """Volume-side vector from ``moments[j] = EV^j_{n+k-j}/vol^j``, ``j = 0..k``."""
    return MomentVector(MomentKind.VOLUME, tuple(moments), n, len(moments) - 1)


def vertex_vector_from_law(law_for_total: DiscreteLaw, n: int, k: int) -> MomentVector:
    """Vertex-side vector with ``N_{n+k}`` distributed as ``law_for_total``."""
    _check_law(law_for_total)
    return MomentVector(
        MomentKind.VERTEX,
        tuple(vertex_ratio(law_for_total, n + k, j) for j in range(k + 1)),
        n,
        k,
    )

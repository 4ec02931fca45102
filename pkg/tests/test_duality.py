import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from efron_dual.duality import (
    DiscreteLaw,
    IntMatrix,
    MomentKind,
    MomentVector,
    eq2_eq3_pointwise,
    expect_identity_eq3,
    expect_identity_eq4,
    factorial_moment_sum,
    falling_factorial,
    inclusion_exclusion_check,
    matrix_A,
    transform,
    verify_involution,
    vertex_vector_from_law,
    volume_vector_from_moments,
)
from efron_dual.errors import ContractViolation

F = Fraction


def test_falling_factorial_examples():
    assert falling_factorial(5, 2) == 20
    assert falling_factorial(7, 0) == 1
    assert falling_factorial(3, 5) == 0


@given(st.integers(0, 60), st.integers(0, 60))
def test_falling_factorial_matches_perm(a, j):
    assert falling_factorial(a, j) == math.perm(a, j)


class TestMatrix:
    def test_examples(self):
        assert matrix_A(0).rows == ((1,),)
        assert matrix_A(1).rows == ((1, 0), (1, -1))
        assert matrix_A(2).rows == ((1, 0, 0), (1, -1, 0), (1, -2, 1))

    def test_lower_triangular(self):
        A = matrix_A(10)
        assert all(A[i, j] == 0 for i in range(11) for j in range(i + 1, 11))

    @pytest.mark.parametrize("k", [0, 1, 2, 7, 30, 64])
    def test_involution(self, k):
        assert verify_involution(k)

    def test_square_by_naive_product(self):
        # independent of IntMatrix.__matmul__
        k = 12
        A = [[(-1) ** j * math.comb(i, j) for j in range(k + 1)] for i in range(k + 1)]
        sq = [[sum(A[i][t] * A[t][j] for t in range(k + 1)) for j in range(k + 1)] for i in range(k + 1)]
        assert sq == [[int(i == j) for j in range(k + 1)] for i in range(k + 1)]

    def test_non_involution_detected(self):
        M = IntMatrix(((1, 0), (1, 1)))
        assert not (M @ M).is_identity()


class TestMomentVector:
    def test_interval_example(self):
        n_vec = MomentVector(MomentKind.VERTEX, (F(1), F(2, 3)), 2, 1)
        v = transform(n_vec)
        assert v.kind is MomentKind.VOLUME and v.entries == (1, F(1, 3))

    @pytest.mark.parametrize("k", [0, 1, 5, 9])
    def test_unit_vector(self, k):
        e = MomentVector(MomentKind.VOLUME, (F(1),) + (F(0),) * k, 1, k)
        assert transform(e).entries == (F(1),) * (k + 1)

    @given(st.lists(st.fractions(max_denominator=50).filter(lambda q: abs(q) < 100), max_size=15))
    @settings(max_examples=100, deadline=None)
    def test_round_trip(self, tail):
        vec = MomentVector(MomentKind.VOLUME, (F(1), *tail), 3, len(tail))
        twice = transform(transform(vec))
        assert twice == vec and twice.kind is MomentKind.VOLUME

    def test_round_trip_float(self):
        rng = random.Random(2)
        vec = MomentVector(MomentKind.VOLUME, (1.0, *(rng.random() for _ in range(8))), 2, 8)
        back = transform(transform(vec))
        assert all(abs(a - b) < 1e-9 for a, b in zip(back.entries, vec.entries))

    def test_contract(self):
        with pytest.raises(ContractViolation):
            MomentVector(MomentKind.VOLUME, (F(1), F(1, 2)), 1, 2)
        with pytest.raises(ContractViolation):
            MomentVector(MomentKind.VOLUME, (F(2), F(1, 2)), 1, 1)
        with pytest.raises(ContractViolation):
            MomentVector(MomentKind.VOLUME, (F(1),), 0, 0)

    def test_last_row_is_eq4_form(self):
        rng = random.Random(3)
        k = 6
        v = (F(1),) + tuple(F(rng.randint(1, 99), 100) for _ in range(k))
        out = transform(MomentVector(MomentKind.VOLUME, v, 2, k))
        assert out.entries[-1] == sum((-1) ** j * math.comb(k, j) * v[j] for j in range(k + 1))


class TestPointwise:
    def test_examples(self):
        assert eq2_eq3_pointwise(3, 2, 1) == (0, 0)
        assert eq2_eq3_pointwise(4, 2, 2) == (0, 0)
        assert eq2_eq3_pointwise(0, 5, 3) == (1, 1)

    def test_full_sweep(self):
        bad = [(N, n, k) for N in range(41) for n in range(1, 21) for k in range(1, 11)
               if (lambda p: p[0] != p[1])(eq2_eq3_pointwise(N, n, k))]
        assert bad == []

    def test_independent_product(self):
        N, n, k = 7, 4, 3
        lhs = math.prod(1 - F(N, n + i) for i in range(1, k + 1))
        assert eq2_eq3_pointwise(N, n, k)[0] == lhs == factorial_moment_sum(N, n, k)


class TestLaws:
    def test_validation(self):
        with pytest.raises(ContractViolation):
            DiscreteLaw((1, 2), (F(1, 2), F(1, 3)))
        with pytest.raises(ContractViolation):
            DiscreteLaw((2, 1), (F(1, 2), F(1, 2)))
        with pytest.raises(ContractViolation):
            DiscreteLaw((1, 2), (F(3, 2), F(-1, 2)))
        with pytest.raises(ContractViolation):
            DiscreteLaw((), ())

    def test_eq3_examples(self):
        two = DiscreteLaw.point_mass(2)
        assert expect_identity_eq3(two, 2, 1, F(1, 3)).passed
        assert expect_identity_eq3(two, 3, 2, F(3, 10)).passed
        assert expect_identity_eq3(two, 1, 1, F(0)).passed
        assert not expect_identity_eq3(two, 3, 2, F(3, 11)).passed

    def test_inclusion_exclusion(self):
        assert inclusion_exclusion_check(DiscreteLaw.uniform([1, 5, 9]), 7, 1)
        assert inclusion_exclusion_check(DiscreteLaw.point_mass(2), 2, 2)
        assert inclusion_exclusion_check(DiscreteLaw.uniform([3, 4]), 2, 2)
        r = 1 - F(2 * 2, 4) + F(2, 12)
        assert r == F(1, 6)

    def test_linearity_closure(self):
        rng = random.Random(11)
        for _ in range(50):
            n, k = rng.randint(1, 8), rng.randint(1, 5)
            support = sorted(rng.sample(range(0, n + k + 1), rng.randint(1, min(4, n + k + 1))))
            w = [rng.randint(1, 9) for _ in support]
            law = DiscreteLaw(tuple(support), tuple(F(x, sum(w)) for x in w))
            lhs = law.expect(lambda N: math.prod(1 - F(N, n + i) for i in range(1, k + 1)))
            rep = expect_identity_eq3(law, n, k, lhs)
            assert rep.passed

    def test_eq4_and_vectors_agree(self):
        law = DiscreteLaw.uniform([3, 4, 5])
        n, k = 2, 3
        nv = vertex_vector_from_law(law, n, k)
        vv = transform(nv)
        rep = expect_identity_eq4(law, n, k, vv.entries)
        assert rep.passed
        assert volume_vector_from_moments(vv.entries, n) == vv

    def test_bad_law_rejected(self):
        class Fake:
            support, probabilities = (1,), (F(1, 2),)

        with pytest.raises(ContractViolation):
            expect_identity_eq3(Fake(), 1, 1, F(0))

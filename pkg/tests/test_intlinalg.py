"""Exact integer linear algebra kernel tests."""

import random
from fractions import Fraction

import pytest
import sympy
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from logsod.intlinalg import (
    feasible_nonneg,
    hermite_row_basis,
    in_row_span,
    invariant_factors,
    nonneg_combination,
    rational_rank,
    separating_functional,
    smith_normal_form,
    solve_linear,
)


def mat_mul(a, b):
    return [
        [sum(x * y for x, y in zip(row, col)) for col in zip(*b)]
        for row in a
    ]


def rand_matrix(rng, rows, cols, bound=9):
    return [[rng.randint(-bound, bound) for _ in range(cols)] for _ in range(rows)]


class TestHermite:
    def test_even_sum_lattice(self):
        assert hermite_row_basis([[2, 0], [1, 1], [0, 2]], 2) == [[1, 1], [0, 2]]

    def test_full_lattice(self):
        assert hermite_row_basis([[1, 0], [0, 1]], 2) == [[1, 0], [0, 1]]

    def test_single_generator(self):
        assert hermite_row_basis([[3]], 1) == [[3]]
        assert hermite_row_basis([[-4, 2]], 2) == [[4, -2]]

    def test_zero_rows_dropped(self):
        assert hermite_row_basis([[0, 0], [2, 4]], 2) == [[2, 4]]

    def test_canonical_shape(self):
        rng = random.Random(7)
        for _ in range(40):
            m = rand_matrix(rng, rng.randint(1, 4), rng.randint(1, 4))
            h = hermite_row_basis(m, len(m[0]))
            pivots = []
            for row in h:
                nz = next(j for j, x in enumerate(row) if x != 0)
                assert row[nz] > 0
                pivots.append(nz)
            assert pivots == sorted(set(pivots))
            for i, row in enumerate(h):
                for above in h[:i]:
                    p = pivots[i]
                    assert 0 <= above[p] < row[p]

    def test_span_preserved(self):
        rng = random.Random(11)
        for _ in range(40):
            m = rand_matrix(rng, rng.randint(1, 4), rng.randint(1, 4))
            h = hermite_row_basis(m, len(m[0]))
            for row in m:
                assert in_row_span(h, row)
            for row in h:
                assert in_row_span(hermite_row_basis(m + [], len(m[0])), row)

    def test_membership(self):
        basis = hermite_row_basis([[2, 0], [1, 1], [0, 2]], 2)
        assert not in_row_span(basis, [1, 0])
        assert in_row_span(basis, [3, 1])
        assert in_row_span(basis, [0, 0])


class TestSmith:
    def test_transform_identity_and_factors(self):
        rng = random.Random(42)
        for _ in range(40):
            m = rand_matrix(rng, rng.randint(1, 4), rng.randint(1, 4))
            u, d, v = smith_normal_form(m)
            assert mat_mul(mat_mul(u, m), v) == d
            assert abs(sympy.Matrix(u).det()) == 1
            assert abs(sympy.Matrix(v).det()) == 1
            diag = [d[i][i] for i in range(min(len(d), len(d[0])))]
            for a, b in zip(diag, diag[1:]):
                if b:
                    assert a != 0 and b % a == 0
            expected = [int(x) for x in sympy_snf(sympy.Matrix(m)).diagonal()]
            got = [abs(x) for x in diag if x]
            want = sorted(abs(x) for x in expected if x)
            assert sorted(got) == want

    def test_frozen_small_cases(self):
        assert invariant_factors([[1, 1], [1, -1]]) == [2]
        assert invariant_factors([[2, 0], [0, 3]]) == [6]
        assert invariant_factors([[2, 0], [0, 3]], keep_ones=True) == [1, 6]
        assert invariant_factors([[1, 0], [0, 1]]) == []

    def test_mixed_root_lattice(self):
        rows = [[1, 1, -1], [0, 2, 0], [0, 0, 3]]
        assert invariant_factors(rows, keep_ones=True) == [1, 1, 6]


class TestSolve:
    def test_unique_solution(self):
        a = [[Fraction(2), Fraction(0)], [Fraction(0), Fraction(2)]]
        assert solve_linear(a, [Fraction(1), Fraction(3)]) == [
            Fraction(1, 2),
            Fraction(3, 2),
        ]

    def test_inconsistent(self):
        a = [[Fraction(1), Fraction(1)], [Fraction(1), Fraction(1)]]
        assert solve_linear(a, [Fraction(0), Fraction(1)]) is None

    def test_rank(self):
        assert rational_rank([[1, 2], [2, 4]]) == 1
        assert rational_rank([[1, 0], [0, 1]]) == 2
        assert rational_rank([[0, 0]]) == 0


class TestFeasibility:
    def test_cone_membership(self):
        assert nonneg_combination([(2, 0), (0, 2)], (1, 1)) == [
            Fraction(1, 2),
            Fraction(1, 2),
        ]
        assert nonneg_combination([(2, 0), (0, 2)], (-1, 0)) is None
        assert nonneg_combination([(1, 0), (1, 3)], (1, 1)) is not None
        assert nonneg_combination([(1, 0), (1, 3)], (0, 1)) is None

    def test_feasible_nonneg_roundtrip(self):
        rng = random.Random(3)
        for _ in range(30):
            cols = [
                tuple(rng.randint(-4, 4) for _ in range(3)) for _ in range(4)
            ]
            coeffs = [Fraction(rng.randint(0, 5), rng.randint(1, 3)) for _ in cols]
            target = tuple(
                sum(c * v[k] for c, v in zip(coeffs, cols)) for k in range(3)
            )
            got = nonneg_combination(cols, target)
            assert got is not None
            rebuilt = tuple(
                sum(c * v[k] for c, v in zip(got, cols)) for k in range(3)
            )
            assert rebuilt == target
            assert all(c >= 0 for c in got)

    def test_separating_functional(self):
        w = separating_functional([(0, 2)], [(2, 0), (1, 1)], 2)
        assert w is not None
        assert sum(a * b for a, b in zip(w, (0, 2))) == 0
        assert sum(a * b for a, b in zip(w, (2, 0))) >= 1
        assert sum(a * b for a, b in zip(w, (1, 1))) >= 1

    def test_separating_functional_infeasible(self):
        assert separating_functional([(1, 1)], [(2, 0), (0, 2)], 2) is None

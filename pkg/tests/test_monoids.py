"""Toric monoid kernel tests: rays, indecomposables, Kummer extensions."""

import math
from fractions import Fraction
from itertools import product

import pytest
import sympy

from conftest import MONOID_LIBRARY, SQUARE_CONE, UNSATURATED
from logsod.errors import NotSharp, NotSimplicial, ParseError, ZeroMonoid
from logsod.monoids import (
    KummerExtension,
    ToricMonoid,
    canonical_kummer_extension,
    contains,
    extremal_rays,
    face_strata,
    group_lattice,
    indecomposables,
    is_saturated,
    is_sharp,
    is_simplicial,
    saturate,
)
from oracles import extremal_dirs_by_facets, kummer_is_minimal, primitive, solve_exact

A1 = ToricMonoid(2, ((2, 0), (1, 1), (0, 2)))


def bounded_combinations(gens, bound):
    """All integer combinations with coefficients in [-bound, bound]."""
    out = set()
    for coeffs in product(range(-bound, bound + 1), repeat=len(gens)):
        v = tuple(sum(c * g[k] for c, g in zip(coeffs, gens)) for k in range(len(gens[0])))
        out.add(v)
    return out


class TestToricMonoid:
    def test_validation(self):
        with pytest.raises(ValueError):
            ToricMonoid(2, ((0, 0),))
        with pytest.raises(ValueError):
            ToricMonoid(2, ((1, 2, 3),))
        with pytest.raises(ValueError):
            ToricMonoid(0, ())

    def test_json_roundtrip(self):
        m = ToricMonoid.from_json(A1.to_json())
        assert m == A1

    def test_bad_payload(self):
        with pytest.raises(ParseError):
            ToricMonoid.from_json({"rank": 2})
        with pytest.raises(ParseError):
            ToricMonoid.from_json({"rank": 2, "generators": [[0, 0]]})
        with pytest.raises(ParseError):
            ToricMonoid.from_json({"rank": "x", "generators": []})


class TestGroupLattice:
    def test_even_sum_lattice(self):
        assert group_lattice(A1) == [(1, 1), (0, 2)]

    def test_standard_lattice(self):
        assert group_lattice(ToricMonoid(2, ((1, 0), (0, 1)))) == [(1, 0), (0, 1)]

    def test_scaled_line(self):
        assert group_lattice(ToricMonoid(1, ((3,),))) == [(3,)]

    def test_box_oracle(self):
        from logsod.intlinalg import in_row_span

        for case in MONOID_LIBRARY[:8]:
            gens = case.monoid.generators
            basis = group_lattice(case.monoid)
            combos = bounded_combinations(gens, 2)
            for v in combos:
                assert in_row_span(basis, list(v))
            for row in basis:
                assert row in bounded_combinations(gens, 4)

    def test_empty_rejected(self):
        with pytest.raises(ZeroMonoid):
            group_lattice(ToricMonoid(2, ()))


class TestExtremalRays:
    def test_library_frozen(self, monoid_library):
        for case in monoid_library:
            assert extremal_rays(case.monoid) == list(case.rays), case.name

    def test_facet_oracle_agreement(self, monoid_library):
        for case in monoid_library:
            got_dirs = sorted(primitive(r) for r in extremal_rays(case.monoid))
            want = extremal_dirs_by_facets(list(case.monoid.generators))
            assert got_dirs == want, case.name

    def test_square_cone_all_extremal(self):
        assert extremal_rays(SQUARE_CONE) == [
            (0, 0, 1), (0, 1, 1), (1, 0, 1), (1, 1, 1),
        ]

    def test_primitive_in_group_lattice(self):
        # (1, 0) is the ambient-primitive direction but (2, 0) generates the
        # ray inside the monoid's own lattice.
        assert (2, 0) in extremal_rays(A1)

    def test_invariance_under_presentation(self):
        base = extremal_rays(A1)
        shuffled = ToricMonoid(2, ((0, 2), (2, 0), (1, 1)))
        assert extremal_rays(shuffled) == base
        fattened = ToricMonoid(2, A1.generators + ((4, 0), (2, 2), (1, 3)))
        assert extremal_rays(fattened) == base

    def test_zero_monoid(self):
        with pytest.raises(ZeroMonoid):
            extremal_rays(ToricMonoid(2, ()))


class TestSimplicial:
    def test_library_all_simplicial(self, monoid_library):
        for case in monoid_library:
            assert is_simplicial(case.monoid), case.name

    def test_square_cone_not_simplicial(self):
        assert not is_simplicial(SQUARE_CONE)


class TestSharpness:
    def test_sharp_cases(self):
        assert is_sharp(A1)
        assert is_sharp(ToricMonoid(2, ()))

    def test_non_sharp(self):
        assert not is_sharp(ToricMonoid(1, ((1,), (-1,))))
        with pytest.raises(NotSharp):
            indecomposables(ToricMonoid(1, ((1,), (-1,))))


class TestContains:
    def test_frozen_memberships(self):
        assert contains(A1, (1, 1))
        assert contains(A1, (3, 1))
        assert contains(A1, (0, 0))
        assert not contains(A1, (1, 0))
        assert not contains(A1, (-1, 1))

    def test_unsaturated_gap(self):
        assert not contains(UNSATURATED, (1, 2))
        assert contains(UNSATURATED, (2, 4))


class TestIndecomposables:
    def test_library_frozen(self, monoid_library):
        for case in monoid_library:
            if case.indecomposables:
                assert indecomposables(case.monoid) == list(case.indecomposables), case.name

    def test_box_oracle(self, monoid_library):
        # Element is indecomposable iff it is not a sum of two nonzero monoid
        # elements; brute force over the saturated membership test.
        for case in monoid_library[:10]:
            m = case.monoid
            rays = extremal_rays(m)
            lattice_box = bounded_combinations(m.generators, 2)

            def member(v):
                if v not in lattice_box:
                    return False
                sol = solve_exact(
                    [[Fraction(r[d]) for r in rays] for d in range(m.ambient_rank)],
                    [Fraction(x) for x in v],
                )
                return sol is not None and all(s >= 0 for s in sol)

            got = set(indecomposables(m))
            for g in set(m.generators):
                decom = False
                for h in set(m.generators):
                    rest = tuple(a - b for a, b in zip(g, h))
                    if any(rest) and member(rest) and contains(m, rest):
                        decom = True
                        break
                assert (g not in got) == decom, (case.name, g)

    def test_redundant_generators_removed(self):
        m = ToricMonoid(2, ((1, 0), (0, 1), (1, 1), (2, 3)))
        assert indecomposables(m) == [(0, 1), (1, 0)]


class TestSaturate:
    def test_third_chart_from_cone(self):
        m = ToricMonoid(2, ((1, 0), (1, 3)))
        assert saturate(m).generators == ((1, 0), (1, 1), (1, 2), (1, 3))

    def test_ambient_saturation_of_sublattice_monoid(self):
        assert saturate(A1).generators == ((0, 1), (1, 0))

    def test_library_is_saturated(self, monoid_library):
        for case in monoid_library:
            assert is_saturated(case.monoid), case.name

    def test_detects_unsaturated(self):
        assert not is_saturated(UNSATURATED)

    def test_saturation_idempotent(self):
        m = saturate(UNSATURATED)
        assert is_saturated(m)
        assert saturate(m) == m


class TestKummerExtension:
    def test_library_frozen(self, monoid_library):
        for case in monoid_library:
            ext = canonical_kummer_extension(case.monoid)
            assert ext.root_orders == case.root_orders, case.name
            assert ext.quotient_invariant_factors == case.quotient, case.name

    def test_minimality_oracle(self, monoid_library):
        for case in monoid_library:
            ext = canonical_kummer_extension(case.monoid)
            non_ray = [
                q for q in indecomposables(case.monoid)
                if q not in set(ext.rays)
            ]
            assert kummer_is_minimal(
                list(ext.rays), non_ray + list(ext.rays), list(ext.root_orders)
            ), case.name

    def test_kummer_property(self, monoid_library):
        for case in monoid_library:
            ext = canonical_kummer_extension(case.monoid)
            for c, v, ray in zip(ext.root_orders, ext.target_basis, ext.rays):
                assert tuple(c * x for x in v) == ray
                assert contains(case.monoid, ray), case.name

    def test_generators_integral_in_extension(self, monoid_library):
        for case in monoid_library:
            ext = canonical_kummer_extension(case.monoid)
            cols = [
                [v[d] for v in ext.target_basis]
                for d in range(case.monoid.ambient_rank)
            ]
            for g in case.monoid.generators:
                sol = solve_exact(cols, [Fraction(x) for x in g])
                assert sol is not None
                assert all(s.denominator == 1 and s >= 0 for s in sol), case.name

    def test_quotient_order_is_lattice_index(self, monoid_library):
        for case in monoid_library:
            ext = canonical_kummer_extension(case.monoid)
            cols = [
                [v[d] for v in ext.target_basis]
                for d in range(case.monoid.ambient_rank)
            ]
            rows = []
            for row in group_lattice(case.monoid):
                sol = solve_exact(cols, [Fraction(x) for x in row])
                rows.append([int(s) for s in sol])
            index = abs(sympy.Matrix(rows).det())
            assert ext.group_order() == index, case.name

    def test_free_identity(self):
        ext = canonical_kummer_extension(ToricMonoid(2, ((1, 0), (0, 1))))
        assert ext.root_orders == (1, 1)
        assert ext.quotient_invariant_factors == ()
        assert ext.group_order() == 1

    def test_not_simplicial_rejected(self):
        with pytest.raises(NotSimplicial):
            canonical_kummer_extension(SQUARE_CONE)

    def test_validation(self):
        with pytest.raises(ValueError):
            KummerExtension(A1, ((Fraction(1), Fraction(0)),), (1, 1), ())
        with pytest.raises(ValueError):
            KummerExtension(
                A1,
                ((Fraction(1), Fraction(0)), (Fraction(2), Fraction(0))),
                (1, 1),
                (),
            )
        with pytest.raises(ValueError):
            KummerExtension(
                A1,
                ((Fraction(1), Fraction(0)), (Fraction(0), Fraction(1))),
                (1, 1),
                (1,),
            )

    def test_json_shape(self):
        js = canonical_kummer_extension(A1).to_json()
        assert js["root_orders"] == [2, 2]
        assert js["quotient_invariant_factors"] == [2]
        assert js["target_basis"] == [[[0, 1], [1, 1]], [[1, 1], [0, 1]]]


class TestFaceStrata:
    def test_free_square_lattice(self):
        fl = face_strata(ToricMonoid(2, ((1, 0), (0, 1))))
        assert len(fl) == 4
        assert [len(f) for f in fl.elements] == [0, 1, 1, 2]

    def test_a1_face_lattice(self):
        fl = face_strata(A1)
        assert len(fl) == 4
        rays = extremal_rays(A1)
        empty, full = (), tuple(rays)
        assert fl.leq(empty, (rays[0],))
        assert fl.leq((rays[0],), full)
        assert not fl.leq(full, empty)
        assert not fl.leq((rays[0],), (rays[1],))

    def test_square_cone_count(self):
        fl = face_strata(SQUARE_CONE)
        assert len(fl) == 10
        from logsod.intlinalg import rational_rank

        dims = [rational_rank(f) for f in fl.elements]
        assert dims == sorted(dims)
        assert dims.count(0) == 1 and dims.count(1) == 4
        assert dims.count(2) == 4 and dims.count(3) == 1

    def test_inclusion_is_subset(self):
        fl = face_strata(A1)
        for a in fl.elements:
            for b in fl.elements:
                assert fl.leq(a, b) == (set(a) <= set(b))

"""Exact algorithms on toric monoids and their rational cones.

A toric monoid is a finitely generated, sharp, integral, saturated submonoid
of a lattice.  This module computes its group lattice, the extremal rays of
its cone (primitive inside the group lattice, not the ambient one), minimal
generating sets, the face lattice, and the minimal free Kummer extension with
root orders and the finite quotient group in invariant-factor form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from typing import Optional, Sequence

from logsod.errors import NotSharp, NotSimplicial, ParseError, ZeroMonoid
from logsod.intlinalg import (
    hermite_row_basis,
    in_row_span,
    invariant_factors,
    nonneg_combination,
    rational_rank,
    separating_functional,
    solve_linear,
)
from logsod.orders import Preorder

__all__ = [
    "KummerExtension",
    "ToricMonoid",
    "canonical_kummer_extension",
    "contains",
    "extremal_rays",
    "face_strata",
    "group_lattice",
    "indecomposables",
    "is_saturated",
    "is_sharp",
    "is_simplicial",
    "saturate",
]

LatticeVector = tuple[int, ...]
RationalVector = tuple[Fraction, ...]


@dataclass(frozen=True)
class ToricMonoid:
    """Submonoid of Z^ambient_rank given by a finite generator list.

    Generators must be nonzero; sharpness and saturation are properties of
    the supplied generator list and are checked on demand, not at
    construction.
    """

    ambient_rank: int
    generators: tuple[LatticeVector, ...]

    def __post_init__(self) -> None:
        if self.ambient_rank < 1:
            raise ValueError("ambient rank must be positive")
        gens = tuple(tuple(int(x) for x in g) for g in self.generators)
        object.__setattr__(self, "generators", gens)
        for g in gens:
            if len(g) != self.ambient_rank:
                raise ValueError(f"generator {g} has wrong length")
            if not any(g):
                raise ValueError("zero generator not allowed")

    @classmethod
    def from_json(cls, data: dict) -> "ToricMonoid":
        try:
            rank = int(data["rank"])
            gens = tuple(tuple(int(x) for x in g) for g in data["generators"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"bad monoid payload: {exc}") from exc
        try:
            return cls(rank, gens)
        except ValueError as exc:
            raise ParseError(str(exc)) from exc

    def to_json(self) -> dict:
        return {"rank": self.ambient_rank, "generators": [list(g) for g in self.generators]}


def _primitive(v: LatticeVector) -> LatticeVector:
    g = math.gcd(*(abs(x) for x in v))
    return tuple(x // g for x in v)


def group_lattice(m: ToricMonoid) -> list[LatticeVector]:
    """Basis of the subgroup of the ambient lattice generated by the monoid,
    in canonical integer echelon form."""
    if not m.generators:
        raise ZeroMonoid("monoid has no generators")
    return [tuple(r) for r in hermite_row_basis(m.generators, m.ambient_rank)]


def extremal_rays(m: ToricMonoid) -> list[LatticeVector]:
    """Primitive generator, inside the group lattice, of each extremal ray
    of the cone spanned by the generators; sorted lexicographically.

    A direction is extremal when it is not a nonnegative rational combination
    of the generators off its ray.
    """
    if not m.generators:
        raise ZeroMonoid("monoid has no generators")
    lattice = group_lattice(m)
    by_dir: dict[LatticeVector, list[LatticeVector]] = {}
    for g in m.generators:
        by_dir.setdefault(_primitive(g), []).append(g)
    rays = []
    for d, on_ray in by_dir.items():
        others = [g for g in m.generators if _primitive(g) != d]
        if others and nonneg_combination(others, d) is not None:
            continue
        rays.append(_lattice_primitive(d, on_ray[0], lattice))
    return sorted(rays)


def _lattice_primitive(
    direction: LatticeVector, witness: LatticeVector, lattice: Sequence[Sequence[int]]
) -> LatticeVector:
    # The witness generator is scale * direction; the primitive multiple of
    # the direction inside the lattice has scale dividing that.
    scale = math.gcd(*(abs(x) for x in witness))
    for t in range(1, scale + 1):
        if scale % t == 0 and in_row_span(lattice, [t * x for x in direction]):
            return tuple(t * x for x in direction)
    raise AssertionError("witness generator must lie in its own lattice")


def is_simplicial(m: ToricMonoid) -> bool:
    """True when the extremal ray directions are linearly independent."""
    rays = extremal_rays(m)
    return rational_rank(rays) == len(rays)


def is_sharp(m: ToricMonoid) -> bool:
    """True when the cone contains no line, i.e. some functional is strictly
    positive on every generator."""
    if not m.generators:
        return True
    return separating_functional([], list(m.generators), m.ambient_rank) is not None


def contains(m: ToricMonoid, vec: Sequence[int]) -> bool:
    """Exact membership of an integer vector in the monoid.

    Searches sums of generators; sharpness guarantees termination because a
    strictly positive functional decreases along every subtraction.
    """
    target = tuple(int(x) for x in vec)
    if not any(target):
        return True
    if not m.generators:
        return False
    if not is_sharp(m):
        raise NotSharp("membership search requires a sharp monoid")
    lattice = group_lattice(m)
    if not in_row_span(lattice, list(target)):
        return False
    gens = sorted(set(m.generators))
    seen: set[LatticeVector] = set()

    def walk(v: LatticeVector) -> bool:
        if not any(v):
            return True
        if v in seen:
            return False
        seen.add(v)
        if nonneg_combination(gens, v) is None:
            return False
        return any(walk(tuple(a - b for a, b in zip(v, g))) for g in gens)

    return walk(target)


def indecomposables(m: ToricMonoid) -> list[LatticeVector]:
    """The unique minimal generating set: generators that are not a sum of
    two nonzero monoid elements; sorted lexicographically."""
    if not is_sharp(m):
        raise NotSharp("indecomposables exist only in sharp monoids")
    uniq = sorted(set(m.generators))
    out = []
    for g in uniq:
        decomposable = False
        for h in uniq:
            rest = tuple(a - b for a, b in zip(g, h))
            if not any(rest):
                continue
            if contains(m, rest):
                decomposable = True
                break
        if not decomposable:
            out.append(g)
    return out


def _cone_points_minimal(m: ToricMonoid, lattice: Optional[list[LatticeVector]]) -> list[LatticeVector]:
    """Minimal generators of the cone's lattice points within the generator
    box; lattice=None means the ambient lattice.

    Membership in the cone-and-lattice monoid reduces to two direct tests,
    so no monoid-sum search is needed to cut the box points down.
    """
    lo = [sum(min(0, g[k]) for g in m.generators) for k in range(m.ambient_rank)]
    hi = [sum(max(0, g[k]) for g in m.generators) for k in range(m.ambient_rank)]
    if math.prod(h - l + 1 for l, h in zip(lo, hi)) > 2_000_000:
        raise ValueError("generator box too large for desk-scale saturation")
    gens = sorted(set(m.generators))

    def member(v: tuple[int, ...]) -> bool:
        if lattice is not None and not in_row_span(lattice, list(v)):
            return False
        return nonneg_combination(gens, v) is not None

    points = [
        p
        for p in product(*(range(l, h + 1) for l, h in zip(lo, hi)))
        if any(p) and member(p)
    ]
    minimal = []
    for g in points:
        decomposable = False
        for h in points:
            rest = tuple(a - b for a, b in zip(g, h))
            if any(rest) and member(rest):
                decomposable = True
                break
        if not decomposable:
            minimal.append(g)
    return sorted(minimal)


def saturate(m: ToricMonoid) -> ToricMonoid:
    """Monoid of all ambient lattice points of the cone over the generators.

    Desk-scale only: the search box grows with rank and coordinate size.
    """
    if not m.generators:
        raise ZeroMonoid("monoid has no generators")
    return ToricMonoid(m.ambient_rank, tuple(_cone_points_minimal(m, None)))


def is_saturated(m: ToricMonoid) -> bool:
    """True when the monoid contains every point of its cone that lies in
    its own group lattice (saturation is intrinsic, not ambient)."""
    if not m.generators:
        raise ZeroMonoid("monoid has no generators")
    lattice = group_lattice(m)
    return all(contains(m, g) for g in _cone_points_minimal(m, lattice))


@dataclass(frozen=True)
class KummerExtension:
    """Minimal free monoid containing the source with finite root orders.

    target_basis lists the rescaled primitive ray generators; root_orders the
    rescaling c_j per ray; quotient_invariant_factors presents the finite
    quotient of the two group lattices (factors >= 2 only).
    """

    source: ToricMonoid
    target_basis: tuple[RationalVector, ...]
    root_orders: tuple[int, ...]
    quotient_invariant_factors: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.target_basis) != len(self.root_orders):
            raise ValueError("one root order per basis vector required")
        if rational_rank(self.target_basis) != len(self.target_basis):
            raise ValueError("target basis must be linearly independent")
        if any(c < 1 for c in self.root_orders):
            raise ValueError("root orders must be positive")
        if any(f < 2 for f in self.quotient_invariant_factors):
            raise ValueError("trivial invariant factors must be omitted")

    @property
    def rays(self) -> tuple[LatticeVector, ...]:
        """Primitive ray generators of the source, recovered as c_j * basis."""
        out = []
        for c, v in zip(self.root_orders, self.target_basis):
            scaled = [c * x for x in v]
            assert all(x.denominator == 1 for x in scaled)
            out.append(tuple(int(x) for x in scaled))
        return tuple(out)

    def group_order(self) -> int:
        return math.prod(self.quotient_invariant_factors)

    def to_json(self) -> dict:
        return {
            "source": self.source.to_json(),
            "target_basis": [
                [[x.numerator, x.denominator] for x in v] for v in self.target_basis
            ],
            "root_orders": list(self.root_orders),
            "quotient_invariant_factors": list(self.quotient_invariant_factors),
        }


def canonical_kummer_extension(m: ToricMonoid) -> KummerExtension:
    """Minimal Kummer extension of a simplicial toric monoid.

    Writes every non-ray indecomposable over the primitive ray generators,
    takes per-ray lcms of the coefficient denominators as root orders, and
    presents the group-lattice quotient in invariant factors.
    """
    rays = extremal_rays(m)
    if rational_rank(rays) != len(rays):
        raise NotSimplicial("extremal rays are linearly dependent")
    ray_set = set(rays)
    others = [q for q in indecomposables(m) if q not in ray_set]
    coeff_cols = [[Fraction(r[d]) for r in rays] for d in range(m.ambient_rank)]
    root_orders = [1] * len(rays)
    for q in others:
        sol = solve_linear(coeff_cols, [Fraction(x) for x in q])
        assert sol is not None, "indecomposable must lie in the ray span"
        for j, coeff in enumerate(sol):
            root_orders[j] = math.lcm(root_orders[j], coeff.denominator)
    basis = tuple(
        tuple(Fraction(x, c) for x in ray) for ray, c in zip(rays, root_orders)
    )
    basis_cols = [[v[d] for v in basis] for d in range(m.ambient_rank)]
    rows = []
    for lattice_row in group_lattice(m):
        sol = solve_linear(basis_cols, [Fraction(x) for x in lattice_row])
        assert sol is not None and all(s.denominator == 1 for s in sol)
        rows.append([int(s) for s in sol])
    factors = tuple(invariant_factors(rows))
    return KummerExtension(m, basis, tuple(root_orders), factors)


def face_strata(m: ToricMonoid) -> Preorder:
    """Face lattice of the cone: every subset of extremal rays cut out by a
    supporting hyperplane, as a preorder under inclusion.

    Elements are faces given as lex-sorted tuples of primitive ray
    generators, listed by increasing dimension; the zero face is the empty
    tuple and the full cone is the tuple of all rays.
    """
    rays = extremal_rays(m)
    faces = [tuple(rays)]
    for k in range(len(rays)):
        for sub in combinations(rays, k):
            rest = [r for r in rays if r not in sub]
            if separating_functional(list(sub), rest, m.ambient_rank) is not None:
                faces.append(tuple(sub))
    faces.sort(key=lambda f: (rational_rank(f), f))
    pairs = [
        (a, b) for a in faces for b in faces if set(a) <= set(b)
    ]
    return Preorder.from_pairs(faces, pairs)

"""Combinatorial models of crossings divisors and simplicial log charts.

Two divisor models live here: SncComplex records which intersections of
globally labeled components are nonempty (the simple normal crossings case),
and NcComplex records crossings branch by branch so one component may pass
through a stratum several times.  Strictification rewrites the second model
into the first by logged point blow-ups.  Simplicial charts are reduced to
their canonical root pair: a free boundary complex plus the finite diagonal
group action whose fixed loci feed the truncated index counts.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterable, Optional, Sequence

from logsod.errors import (
    InconsistentIncidence,
    ParseError,
    UnknownStratum,
    UnsupportedConfiguration,
)
from logsod.intlinalg import smith_normal_form, solve_linear
from logsod.monoids import ToricMonoid, canonical_kummer_extension, group_lattice
from logsod.orders import enumerate_characters

__all__ = [
    "BlowupLog",
    "BlowupStep",
    "Crossing",
    "FixedLocusData",
    "NcComplex",
    "SimplicialChart",
    "SncComplex",
    "canonical_root_pair",
    "fixed_locus_index",
    "is_simple",
    "nc_from_json",
    "normalize_stratum",
    "snc_from_divisors",
    "snc_of_simple",
    "strictify",
    "strictify_nc",
]

Stratum = frozenset


@dataclass(frozen=True)
class SncComplex:
    """Simple normal crossings combinatorics: components and the set of
    index subsets whose intersection stratum is nonempty.

    stratum_meta may carry per-stratum payloads (names, crossing lists,
    connected-component counts); it does not affect equality.
    """

    components: tuple
    nonempty: frozenset[Stratum]
    stratum_meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self) -> None:
        comp = set(self.components)
        if len(comp) != len(self.components):
            raise ValueError("component labels must be distinct")
        if frozenset() not in self.nonempty:
            raise ValueError("the empty intersection (the total space) is nonempty")
        for j in self.nonempty:
            if not j <= comp:
                raise ValueError(f"stratum {sorted(j)} uses unknown components")
            for c in j:
                if j - {c} not in self.nonempty:
                    raise ValueError("nonempty strata must be downward closed")

    def is_nonempty(self, subset: Iterable) -> bool:
        return frozenset(subset) in self.nonempty

    def strata(self, *, proper: bool = False) -> list[Stratum]:
        """Nonempty strata, deepest first then lexicographic; proper=True
        drops the empty index set (the total space)."""
        out = sorted(self.nonempty, key=lambda j: (-len(j), _label_key(j)))
        if proper:
            out = [j for j in out if j]
        return out

    def stratum_name(self, subset: Iterable) -> str:
        j = frozenset(subset)
        if j not in self.nonempty:
            raise UnknownStratum(f"no stratum {sorted(j, key=_token)}")
        if not j:
            return "X"
        order = {c: k for k, c in enumerate(self.components)}
        names = sorted((str(c) for c in j), key=lambda s: order.get(s, s))
        return "D_{" + ",".join(names) + "}"

    def to_json(self) -> dict:
        return {
            "components": [_encode(c) for c in self.components],
            "nonempty": [sorted((_encode(c) for c in j), key=str)
                         for j in self.strata()],
        }


def _token(x):
    return (0, x) if isinstance(x, int) and not isinstance(x, bool) else (1, str(x))


def _label_key(j: Stratum):
    return tuple(sorted((_token(c) for c in j)))


def _encode(label):
    return label


def snc_from_divisors(
    components: Sequence,
    nonempty: Iterable[Iterable],
    empty: Iterable[Iterable] = (),
) -> SncComplex:
    """Build a validated complex from explicit nonempty intersections.

    Subsets of declared-nonempty strata are added automatically (with a
    warning) since an intersection can only be nonempty if every smaller one
    is.  Explicitly declared empty strata that contradict this raise
    InconsistentIncidence.
    """
    comps = tuple(components)
    declared = {frozenset(j) for j in nonempty}
    declared.add(frozenset())
    declared_empty = {frozenset(j) for j in empty}
    closure = set()
    for j in declared:
        for mask in range(1 << len(j)):
            items = tuple(j)
            sub = frozenset(c for k, c in enumerate(items) if mask >> k & 1)
            closure.add(sub)
    missing = closure - declared
    if missing:
        hit = missing & declared_empty
        if hit:
            bad = sorted(hit, key=_label_key)[0]
            raise InconsistentIncidence(
                f"stratum {sorted(bad, key=_token)} declared empty but a "
                "larger intersection is declared nonempty"
            )
        warnings.warn(
            f"added {len(missing)} implied nonempty strata", stacklevel=2
        )
    overlap = closure & declared_empty
    if overlap:
        bad = sorted(overlap, key=_label_key)[0]
        raise InconsistentIncidence(
            f"stratum {sorted(bad, key=_token)} declared both empty and nonempty"
        )
    return SncComplex(comps, frozenset(closure))


@dataclass(frozen=True)
class Crossing:
    """One stratum of a crossings divisor, listed branch by branch.

    A branch is a (component label, branch id) pair; ids tell apart the
    sheets of one component passing through the same stratum.  The stratum's
    codimension always equals the number of branches.
    """

    name: str
    branches: tuple[tuple, ...]
    origin: Optional[tuple] = None

    def __post_init__(self) -> None:
        pairs = [(c, b) for c, b in self.branches]
        if len(set(pairs)) != len(pairs):
            raise ValueError(f"crossing {self.name}: duplicate branch records")
        if not pairs:
            raise ValueError(f"crossing {self.name}: needs at least one branch")

    @property
    def codim(self) -> int:
        return len(self.branches)

    @property
    def component_labels(self) -> tuple:
        return tuple(c for c, _ in self.branches)

    def is_simple(self) -> bool:
        labels = self.component_labels
        return len(set(labels)) == len(labels)


@dataclass(frozen=True)
class NcComplex:
    """Crossings divisor: components plus explicitly listed crossings.

    closure_pairs lists (inner, outer) crossing names where the inner
    stratum lies in the closure of the outer one; ambient_dim, when known,
    lets point-likeness be decided by codimension alone.
    """

    components: tuple
    crossings: tuple[Crossing, ...]
    closure_pairs: tuple[tuple[str, str], ...] = ()
    ambient_dim: Optional[int] = None

    def __post_init__(self) -> None:
        comp = set(self.components)
        if len(comp) != len(self.components):
            raise ValueError("component labels must be distinct")
        names = [s.name for s in self.crossings]
        if len(set(names)) != len(names):
            raise ValueError("crossing names must be distinct")
        for s in self.crossings:
            for c, _ in s.branches:
                if c not in comp:
                    raise ValueError(f"crossing {s.name} uses unknown component {c!r}")
            if self.ambient_dim is not None and s.codim > self.ambient_dim:
                raise ValueError(
                    f"crossing {s.name} has codimension {s.codim} above the ambient dimension"
                )
        for inner, outer in self.closure_pairs:
            if inner not in set(names) or outer not in set(names):
                raise ValueError(f"closure pair ({inner}, {outer}) names unknown crossings")

    def crossing(self, name: str) -> Crossing:
        for s in self.crossings:
            if s.name == name:
                return s
        raise UnknownStratum(f"no crossing named {name!r}")

    def to_json(self) -> dict:
        return {
            "components": list(self.components),
            "crossings": [
                {
                    "name": s.name,
                    "branches": [[c, b] for c, b in s.branches],
                    "codim": s.codim,
                }
                for s in self.crossings
            ],
            "closure_pairs": [list(p) for p in self.closure_pairs],
            "ambient_dim": self.ambient_dim,
        }


def nc_from_json(data: dict) -> NcComplex:
    try:
        comps = tuple(data["components"])
        crossings = []
        for k, rec in enumerate(data["crossings"]):
            name = rec.get("name", f"S{k + 1}")
            branches = tuple((c, int(b)) for c, b in rec["branches"])
            if "codim" in rec and int(rec["codim"]) != len(branches):
                raise ParseError(
                    f"crossing {name}: codim {rec['codim']} does not match "
                    f"{len(branches)} branches"
                )
            crossings.append(Crossing(name, branches))
        closure = tuple((a, b) for a, b in data.get("closure_pairs", ()))
        dim = data.get("ambient_dim")
        return NcComplex(comps, tuple(crossings), closure,
                         None if dim is None else int(dim))
    except ParseError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad crossings payload: {exc}") from exc


def is_simple(nc: NcComplex) -> bool:
    """True when no crossing carries the same component on two branches."""
    return all(s.is_simple() for s in nc.crossings)


@dataclass(frozen=True)
class BlowupStep:
    stratum: str
    codim: int
    exceptional: str


@dataclass(frozen=True)
class BlowupLog:
    steps: tuple[BlowupStep, ...]

    def to_json(self) -> list:
        return [
            {"stratum": s.stratum, "codim": s.codim, "exceptional": s.exceptional}
            for s in self.steps
        ]


def _point_like(nc: NcComplex, s: Crossing) -> bool:
    if nc.ambient_dim is not None:
        return s.codim == nc.ambient_dim
    return all(outer != s.name for _, outer in nc.closure_pairs)


def strictify_nc(nc: NcComplex) -> tuple[NcComplex, BlowupLog]:
    """Blow up point-like non-simple crossings, deepest first, until every
    crossing is simple; returns the rewritten complex and the step log.

    Each blow-up removes one crossing of codimension d, adds one fresh
    exceptional component, and records d simple codimension-2 crossings
    where the branches now meet the exceptional divisor separately.
    """
    current = nc
    steps: list[BlowupStep] = []
    counter = 1
    while not is_simple(current):
        worst = max(s.codim for s in current.crossings if not s.is_simple())
        batch = sorted(
            (s for s in current.crossings if not s.is_simple() and s.codim == worst),
            key=lambda s: s.name,
        )
        crossings = list(current.crossings)
        components = list(current.components)
        closure = list(current.closure_pairs)
        for s in batch:
            if not _point_like(current, s):
                raise UnsupportedConfiguration(
                    f"crossing {s.name} is non-simple but not point-like; "
                    "only point blow-ups are supported"
                )
            label = f"E{counter}"
            while label in components:
                counter += 1
                label = f"E{counter}"
            counter += 1
            components.append(label)
            crossings.remove(s)
            for i, (c, b) in enumerate(s.branches, start=1):
                crossings.append(
                    Crossing(
                        f"{s.name}.{i}",
                        ((label, 1), (c, b)),
                        origin=("blowup", s.name, i, c, b),
                    )
                )
            closure = [p for p in closure if s.name not in p]
            steps.append(BlowupStep(s.name, s.codim, label))
        dim = current.ambient_dim
        current = NcComplex(tuple(components), tuple(crossings), tuple(closure), dim)
    return current, BlowupLog(tuple(steps))


def snc_of_simple(nc: NcComplex) -> SncComplex:
    """View a simple crossings complex through its nonempty strata; the
    per-stratum metadata lists the witnessing crossings."""
    if not is_simple(nc):
        raise UnsupportedConfiguration("complex still has non-simple crossings")
    nonempty = {frozenset()}
    meta: dict[Stratum, dict] = {}
    for c in nc.components:
        nonempty.add(frozenset({c}))
    for s in nc.crossings:
        support = frozenset(s.component_labels)
        for mask in range(1 << len(support)):
            items = tuple(support)
            sub = frozenset(x for k, x in enumerate(items) if mask >> k & 1)
            nonempty.add(sub)
        bucket = meta.setdefault(support, {"crossings": []})
        bucket["crossings"].append(s.name)
    for j, bucket in meta.items():
        bucket["crossings"].sort()
        bucket["count"] = len(bucket["crossings"])
    return SncComplex(tuple(nc.components), frozenset(nonempty), meta)


def strictify(nc: NcComplex) -> tuple[SncComplex, BlowupLog]:
    """Strictification endpoint: simple-complex view plus the blow-up log."""
    simple, log = strictify_nc(nc)
    return snc_of_simple(simple), log


def normalize_stratum(nc: NcComplex, stratum) -> list[tuple[str, int]]:
    """Labels (with multiplicities) of the normalization of a stratum.

    A component label normalizes to a single label; a simple crossing stays
    itself; a non-simple crossing splits into one label per branch since the
    normalization separates the sheets through it.
    """
    if stratum in set(nc.components):
        return [(str(stratum), 1)]
    s = nc.crossing(str(stratum))
    if s.is_simple():
        return [(s.name, 1)]
    return [(f"{s.name}@{i}", 1) for i in range(1, s.codim + 1)]


@dataclass(frozen=True)
class FixedLocusData:
    """Finite diagonal group action data on the canonical root pair.

    invariant_factors define the group as a product of cyclic factors (each
    >= 2); weights[k][j] is the k-th factor's weight on the j-th boundary
    component's coordinate; fixed_components lists, per nontrivial group
    element, the stratum of coordinates it does not fix.
    """

    components: tuple
    invariant_factors: tuple[int, ...]
    weights: tuple[tuple[int, ...], ...]
    fixed_components: tuple[tuple[tuple[int, ...], Stratum], ...]

    def __post_init__(self) -> None:
        if len(self.weights) != len(self.invariant_factors):
            raise ValueError("one weight row per invariant factor required")
        for row in self.weights:
            if len(row) != len(self.components):
                raise ValueError("one weight per component required")

    def group_order(self) -> int:
        order = 1
        for d in self.invariant_factors:
            order *= d
        return order

    def to_json(self) -> dict:
        return {
            "components": list(self.components),
            "invariant_factors": list(self.invariant_factors),
            "weights": [list(r) for r in self.weights],
            "fixed_components": [
                {"element": list(g), "stratum": sorted(t, key=str)}
                for g, t in self.fixed_components
            ],
        }


@dataclass(frozen=True)
class SimplicialChart:
    """Chart list for a simplicial log pair; desk scale supports one global
    chart with arbitrary finite diagonal quotient, or several charts that
    are all free (no quotient), treated as a disjoint union."""

    monoids: tuple[ToricMonoid, ...]

    def __post_init__(self) -> None:
        if not self.monoids:
            raise ValueError("chart list must be nonempty")


def canonical_root_pair(chart: SimplicialChart) -> tuple[SncComplex, FixedLocusData]:
    """Free boundary complex and group data of the canonical root pair.

    Single chart: components are the extremal rays (labeled R1, R2, ... in
    lexicographic ray order), every subset of rays is a face of a simplicial
    cone hence a nonempty stratum, and the quotient group acts diagonally
    with weights computed from the lattice quotient.  Several charts are
    supported only when all are free; the result is their disjoint union
    with trivial group.
    """
    if len(chart.monoids) == 1:
        return _single_chart_pair(chart.monoids[0], prefix="R")
    pieces = []
    for k, m in enumerate(chart.monoids, start=1):
        ext = canonical_kummer_extension(m)
        if ext.quotient_invariant_factors:
            raise UnsupportedConfiguration(
                "multiple charts are supported only when every chart is free"
            )
        pieces.append(_single_chart_pair(m, prefix=f"C{k}.R"))
    components: list = []
    nonempty = {frozenset()}
    meta: dict = {}
    for cx, _ in pieces:
        components.extend(cx.components)
        nonempty |= cx.nonempty
        meta.update(cx.stratum_meta)
    snc = SncComplex(tuple(components), frozenset(nonempty), meta)
    data = FixedLocusData(tuple(components), (), (), ())
    return snc, data


def _single_chart_pair(m: ToricMonoid, prefix: str) -> tuple[SncComplex, FixedLocusData]:
    ext = canonical_kummer_extension(m)
    rays = ext.rays
    labels = tuple(f"{prefix}{j}" for j in range(1, len(rays) + 1))
    nonempty = frozenset(
        frozenset(lab for k, lab in enumerate(labels) if mask >> k & 1)
        for mask in range(1 << len(labels))
    )
    meta = {
        frozenset({lab}): {"ray": list(ray)}
        for lab, ray in zip(labels, rays)
    }
    factors, weights = _quotient_weights(m, ext)
    fixed = []
    for g in product(*(range(d) for d in factors)):
        if not any(g):
            continue
        moved = frozenset(
            lab
            for j, lab in enumerate(labels)
            if sum(Fraction(gk * wrow[j], dk) for gk, wrow, dk in zip(g, weights, factors)) % 1 != 0
        )
        fixed.append((g, moved))
    data = FixedLocusData(labels, factors, weights, tuple(fixed))
    return SncComplex(labels, nonempty, meta), data


def _quotient_weights(m: ToricMonoid, ext) -> tuple[tuple[int, ...], tuple[tuple[int, ...], ...]]:
    # Lattice basis vectors in root-basis coordinates form the columns; the
    # left Smith transform then carries each coordinate direction to its
    # class in the diagonalized quotient.
    basis_cols = [[v[d] for v in ext.target_basis] for d in range(m.ambient_rank)]
    col_vectors = []
    for row in group_lattice(m):
        sol = solve_linear(basis_cols, [Fraction(x) for x in row])
        assert sol is not None and all(s.denominator == 1 for s in sol)
        col_vectors.append([int(s) for s in sol])
    n = len(ext.target_basis)
    mat = [[col_vectors[c][r] for c in range(len(col_vectors))] for r in range(n)]
    u, d, _ = smith_normal_form(mat)
    diag = [d[i][i] for i in range(n)]
    keep = [k for k, dk in enumerate(diag) if abs(dk) >= 2]
    factors = tuple(abs(diag[k]) for k in keep)
    weights = tuple(
        tuple(u[k][j] % abs(diag[k]) for j in range(n)) for k in keep
    )
    return factors, weights


def fixed_locus_index(data: FixedLocusData, stratum: Iterable, truncation: int) -> int:
    """Size of the truncated character index over a stratum: nonzero
    characters on the stratum itself plus, per group element whose moved
    coordinates sit inside the stratum, those on the fixed component.

    Counts are taken at cyclic order `truncation` in every coordinate.
    """
    s = frozenset(stratum)
    comp = set(data.components)
    if not s <= comp:
        raise UnknownStratum(f"stratum {sorted(s, key=str)} uses unknown components")
    if truncation < 1:
        raise ValueError("truncation must be a positive integer")

    def star_count(codim: int) -> int:
        orders = [truncation] * max(codim, 1)
        support = set(range(1, codim + 1))
        return len(enumerate_characters(orders, support, star=True))

    total = star_count(len(s))
    for _, moved in data.fixed_components:
        if moved <= s:
            total += star_count(len(moved))
    return total

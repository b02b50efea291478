"""Ordered factor-label descriptors for root stacks of crossings pairs.

A descriptor is pure bookkeeping: an ordered list of (stratum, character)
labels with provenance, one per character of the level's cyclic product
group.  Admissibility of the underlying subcategories is not re-proved
here; the descriptors exist to make label sets, orders, and counting
identities checkable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

from logsod.complexes import (
    NcComplex,
    SimplicialChart,
    SncComplex,
    canonical_root_pair,
    normalize_stratum,
    snc_from_divisors,
    strictify_nc,
    snc_of_simple,
)
from logsod.errors import NonDiagonalLevel
from logsod.orders import (
    CharVector,
    cmp_factorial_vector,
    enumerate_characters,
    factorial_vector_key,
    Rel,
    vector_first_level,
)

__all__ = [
    "FactorLabel",
    "PsodDescriptor",
    "bls_divergence",
    "embedding_check",
    "psod_bls",
    "psod_infinite",
    "psod_nc",
    "psod_simplicial",
    "psod_single",
    "psod_snc",
]

BASE = "BaseStack"
GERBE = "GerbeCharacter"


@dataclass(frozen=True)
class FactorLabel:
    """One factor: a character with its exact support and provenance.

    The base factor is the zero character on the empty stratum; every other
    label is a gerbe character.  zero marks labels whose stratum is empty in
    the incidence data (kept so counting identities stay exact); first_level
    and normalized are annotations added by the infinite and nc builders.
    """

    stratum: frozenset
    character: CharVector
    provenance: str
    zero: bool = False
    first_level: Optional[int] = None
    normalized: Optional[tuple[tuple[str, int], ...]] = None

    def key(self) -> tuple[frozenset, CharVector]:
        return (self.stratum, self.character)

    def to_json(self) -> dict:
        out = {
            "stratum": sorted(self.stratum, key=_token),
            "char": [c.to_pair() for c in self.character],
            "provenance": self.provenance,
            "zero": self.zero,
        }
        if self.first_level is not None:
            out["first_level"] = self.first_level
        if self.normalized is not None:
            out["normalized"] = [[lab, mult] for lab, mult in self.normalized]
        return out


def _token(x):
    return (0, x) if isinstance(x, int) and not isinstance(x, bool) else (1, str(x))


@dataclass(frozen=True)
class PsodDescriptor:
    """Ordered label family for one level of the root-stack tower.

    labels are listed ascending in the declared order, so the base factor
    comes last in factorial descriptors.  level gives the per-component
    cyclic order; truncation is set when the descriptor presents a stage of
    the infinite tower.  base_breakdown records blow-up factor counts for
    the base, metadata only.
    """

    components: tuple
    labels: tuple[FactorLabel, ...]
    order: str
    level: tuple[int, ...]
    truncation: Optional[int] = None
    base_breakdown: Optional[tuple[tuple[str, int], ...]] = None

    def __post_init__(self) -> None:
        if self.order not in ("standard", "factorial"):
            raise ValueError(f"unknown order tag {self.order!r}")
        if len(self.level) != len(self.components):
            raise ValueError("one cyclic order per component required")
        if any(r < 1 for r in self.level):
            raise ValueError("cyclic orders must be positive")
        if len(set(self.components)) != len(self.components):
            raise ValueError("component labels must be distinct")
        expected = math.prod(self.level)
        if len(self.labels) != expected:
            raise ValueError(
                f"{len(self.labels)} labels but the level enumerates {expected}"
            )
        seen = set()
        for lab in self.labels:
            if len(lab.character) != len(self.components):
                raise ValueError("character length must match the components")
            support = frozenset(
                c for c, x in zip(self.components, lab.character) if not x.is_zero()
            )
            if support != lab.stratum:
                raise ValueError(f"stratum {sorted(lab.stratum, key=_token)} "
                                 "does not match the character support")
            if (lab.provenance == BASE) != (not support):
                raise ValueError("base labels are exactly the zero-character ones")
            if lab.provenance not in (BASE, GERBE):
                raise ValueError(f"unknown provenance {lab.provenance!r}")
            for x, r in zip(lab.character, self.level):
                if r % x.q:
                    raise ValueError(f"character {x} does not live at level {r}")
            if lab.character in seen:
                raise ValueError("labels must be pairwise distinct")
            seen.add(lab.character)
        if self.truncation is not None:
            fact = math.factorial(self.truncation)
            if any(r != fact for r in self.level):
                raise ValueError("truncation descriptors live at diagonal n! level")

    @property
    def zero_factors(self) -> tuple[FactorLabel, ...]:
        return tuple(lab for lab in self.labels if lab.zero)

    def base_label(self) -> FactorLabel:
        return next(lab for lab in self.labels if lab.provenance == BASE)

    def to_json(self) -> dict:
        out = {
            "components": list(self.components),
            "level": list(self.level),
            "order": self.order,
            "labels": [lab.to_json() for lab in self.labels],
        }
        if self.truncation is not None:
            out["truncation"] = self.truncation
        if self.base_breakdown is not None:
            out["base_breakdown"] = [[s, k] for s, k in self.base_breakdown]
        return out


def _standard_key(chi: CharVector) -> tuple[Fraction, ...]:
    # Lexicographic by coordinate value: a deterministic linear extension of
    # the componentwise standard order.
    return tuple(c.value for c in chi)


def _labels_for(
    cx: SncComplex, level: tuple[int, ...], order: str
) -> list[FactorLabel]:
    chars = enumerate_characters(level, range(1, len(level) + 1))
    if order == "standard":
        chars = sorted(chars, key=_standard_key)
    out = []
    for chi in chars:
        support = frozenset(
            c for c, x in zip(cx.components, chi) if not x.is_zero()
        )
        out.append(
            FactorLabel(
                stratum=support,
                character=chi,
                provenance=BASE if not support else GERBE,
                zero=not cx.is_nonempty(support),
            )
        )
    return out


def _single_divisor_complex() -> SncComplex:
    return snc_from_divisors(("D",), [[], ["D"]])


def psod_single(n: int) -> PsodDescriptor:
    """Single-divisor descriptor at level n! in the factorial order.

    The n=3 sequence is the degree-6 chain -5/6, -2/6, -4/6, -1/6, -3/6, 0;
    the zero character is the base factor and comes last.
    """
    if n < 1:
        raise ValueError("level must be a positive integer")
    cx = _single_divisor_complex()
    fact = math.factorial(n)
    return PsodDescriptor(
        components=cx.components,
        labels=tuple(_labels_for(cx, (fact,), "factorial")),
        order="factorial",
        level=(fact,),
    )


def psod_bls(r: int) -> PsodDescriptor:
    """Single-divisor descriptor at level r in the standard order: the
    one-step chain -(r-1)/r, ..., -1/r, 0."""
    if r < 1:
        raise ValueError("level must be a positive integer")
    cx = _single_divisor_complex()
    return PsodDescriptor(
        components=cx.components,
        labels=tuple(_labels_for(cx, (r,), "standard")),
        order="standard",
        level=(r,),
    )


def bls_divergence(n: int) -> dict:
    """Compare psod_bls(n!) against psod_single(n).

    The label sets always agree; the sequences agree up to n=2 and first
    diverge at n=3.  Labels already present at the previous stage (the
    nonzero characters of order dividing (n-1)!) are flagged: at those the
    two constructions name genuinely different subcategories.
    """
    single = psod_single(n)
    one_step = psod_bls(math.factorial(n))
    flagged = tuple(
        chi[0]
        for chi in enumerate_characters([math.factorial(n - 1)], {1}, star=True)
    ) if n >= 2 else ()
    return {
        "level": n,
        "labels_match": {l.character for l in single.labels}
        == {l.character for l in one_step.labels},
        "order_matches": [l.character for l in single.labels]
        == [l.character for l in one_step.labels],
        "non_identical": flagged,
    }


def _is_factorial(r: int) -> Optional[int]:
    n, fact = 1, 1
    while fact < r:
        n += 1
        fact *= n
    return n if fact == r else None


def psod_snc(cx: SncComplex, level: Iterable[int], order: str = "factorial") -> PsodDescriptor:
    """Descriptor for a simple normal crossings complex at a finite level.

    Labels run over all characters of the level's cyclic product, bucketed
    by exact support; supports that are empty in the incidence data are kept
    but flagged.  The factorial order requires a diagonal factorial level.
    """
    level = tuple(int(r) for r in level)
    if len(level) != len(cx.components):
        raise ValueError("one cyclic order per component required")
    if order == "factorial":
        if len(set(level)) > 1 or (level and _is_factorial(level[0]) is None):
            raise NonDiagonalLevel(
                f"factorial order needs a diagonal n! level, got {list(level)}"
            )
    elif order != "standard":
        raise ValueError(f"unknown order tag {order!r}")
    return PsodDescriptor(
        components=cx.components,
        labels=tuple(_labels_for(cx, level, order)),
        order=order,
        level=level,
    )


def psod_infinite(cx: SncComplex, truncation: int) -> PsodDescriptor:
    """Stage n of the infinite tower: the level-n! factorial descriptor with
    each label annotated by the first stage where it appears."""
    if truncation < 1:
        raise ValueError("truncation must be a positive integer")
    fact = math.factorial(truncation)
    base = psod_snc(cx, (fact,) * len(cx.components), "factorial")
    labels = tuple(
        FactorLabel(
            stratum=lab.stratum,
            character=lab.character,
            provenance=lab.provenance,
            zero=lab.zero,
            first_level=vector_first_level(lab.character),
        )
        for lab in base.labels
    )
    return PsodDescriptor(
        components=base.components,
        labels=labels,
        order="factorial",
        level=base.level,
        truncation=truncation,
    )


FULL_CHECK_CAP = 40_000
SUBLEVEL_CHECK_CAP = 600_000
SAMPLE_STRIDE = 7919


def embedding_check(
    cx: SncComplex,
    n: int,
    level_descriptor: Optional[PsodDescriptor] = None,
    sublevel_descriptor: Optional[PsodDescriptor] = None,
) -> dict:
    """Verify stage n-1 of the tower embeds in stage n compatibly.

    Checks that the (n-1)! labels are a subset of the n! labels and that the
    factorial order restricts correctly.  Small levels are checked in full;
    middling ones materialize only the sublevel; beyond that the scalar
    chains are still checked exhaustively and vector pairs are sampled with
    a fixed stride.  The report names its mode and any counterexamples.
    """
    if n < 2:
        raise ValueError("embedding needs n >= 2")
    k = len(cx.components)
    big_count = math.factorial(n) ** k
    small_count = math.factorial(n - 1) ** k
    report: dict = {"passed": True, "level": n, "counterexamples": []}

    def fail(kind, *items):
        report["passed"] = False
        report["counterexamples"].append((kind, *items))

    if big_count <= FULL_CHECK_CAP:
        report["mode"] = "full"
        big = level_descriptor or psod_infinite(cx, n)
        small = sublevel_descriptor or psod_infinite(cx, n - 1)
        big_chars = {lab.character for lab in big.labels}
        small_seq = [lab.character for lab in small.labels]
        small_set = set(small_seq)
        for chi in small_seq:
            if chi not in big_chars:
                fail("missing-label", chi)
        restricted = [
            lab.character for lab in big.labels if lab.character in small_set
        ]
        if restricted != small_seq and report["passed"]:
            for a, b in zip(restricted, small_seq):
                if a != b:
                    fail("order-mismatch", a, b)
                    break
        return report

    if small_count <= SUBLEVEL_CHECK_CAP:
        report["mode"] = "sublevel"
        small = sublevel_descriptor or psod_infinite(cx, n - 1)
        fact = math.factorial(n)
        seq = [lab.character for lab in small.labels]
        for chi in seq:
            if any(fact % c.q for c in chi):
                fail("missing-label", chi)
        keys = [factorial_vector_key(chi) for chi in seq]
        if keys != sorted(keys):
            bad = next(i for i in range(len(keys) - 1) if keys[i] > keys[i + 1])
            fail("order-mismatch", seq[bad], seq[bad + 1])
        for i in range(0, len(seq) - 1, max(1, len(seq) // 997)):
            if cmp_factorial_vector(seq[i], seq[i + 1]) is Rel.GT:
                fail("comparator-mismatch", seq[i], seq[i + 1])
        return report

    report["mode"] = "sampled"
    scalar = embedding_check(_single_divisor_complex(), n)
    if not scalar["passed"]:
        report["passed"] = False
        report["counterexamples"] = scalar["counterexamples"]
        return report
    # Componentwise the sublevel chain is contained in the level chain, so
    # label inclusion holds; sample vector pairs for order consistency.
    fact_small = math.factorial(n - 1)
    axis = [chi[0] for chi in enumerate_characters([fact_small], {1})]
    picks = []
    idx = 0
    while len(picks) < 400:
        combo = []
        key = idx
        for _ in range(k):
            combo.append(axis[key % len(axis)])
            key //= len(axis)
        picks.append(tuple(combo))
        idx += SAMPLE_STRIDE
    keyed = sorted(picks, key=factorial_vector_key)
    for a, b in zip(keyed, keyed[1:]):
        if cmp_factorial_vector(a, b) is Rel.GT:
            fail("comparator-mismatch", a, b)
    return report


def psod_nc(nc: NcComplex, truncation: int) -> PsodDescriptor:
    """Descriptor of an nc pair via its strictification.

    Builds the infinite-tower stage on the strictified complex, then
    annotates every label with the normalized strata of the original pair
    it lives on: original components normalize once, blow-up crossings point
    back to the branch they separated, exceptional components stay
    themselves.  The base label records the blow-up factor counts (one copy
    of the center per codimension step) as descriptor metadata.
    """
    simple, log = strictify_nc(nc)
    snc = snc_of_simple(simple)
    desc = psod_infinite(snc, truncation)
    origin_of = {s.name: s.origin for s in simple.crossings}
    originals = set(nc.components)

    def annotate(lab: FactorLabel) -> tuple[tuple[str, int], ...] | None:
        if not lab.stratum:
            return (("X", 1),)
        if len(lab.stratum) == 1:
            (c,) = lab.stratum
            if c in originals:
                return tuple(normalize_stratum(nc, c))
            return ((str(c), 1),)
        meta = snc.stratum_meta.get(lab.stratum)
        if meta is None:
            return None
        out = []
        for name in meta["crossings"]:
            origin = origin_of.get(name)
            if origin and origin[0] == "blowup":
                _, center, branch_index, _, _ = origin
                out.append((f"{center}@{branch_index}", 1))
            else:
                out.append((name, 1))
        return tuple(out)

    labels = tuple(
        FactorLabel(
            stratum=lab.stratum,
            character=lab.character,
            provenance=lab.provenance,
            zero=lab.zero,
            first_level=lab.first_level,
            normalized=annotate(lab),
        )
        for lab in desc.labels
    )
    breakdown = tuple((step.stratum, step.codim - 1) for step in log.steps)
    return PsodDescriptor(
        components=desc.components,
        labels=labels,
        order="factorial",
        level=desc.level,
        truncation=truncation,
        base_breakdown=breakdown,
    )


def psod_simplicial(chart: SimplicialChart, truncation: int) -> PsodDescriptor:
    """Infinite-tower stage over the canonical root pair of a chart list;
    labels reference the root pair's boundary components."""
    snc, _ = canonical_root_pair(chart)
    return psod_infinite(snc, truncation)

"""Character alphabets and the orders that sequence decomposition factors.

Characters are rationals in (-1, 0] representing classes in Q/Z.  The module
provides the standard numeric order, the factorial order used to sequence
root-of-unity twists across the factorial tower Z_{n!}, normal factorial
forms, finite preorders with joins, and enumeration of character vectors
grouped by support.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Iterable, Optional, Sequence

from logsod.errors import LengthMismatch

__all__ = [
    "Character",
    "CharVector",
    "FactorialForm",
    "Preorder",
    "Rel",
    "as_vector",
    "cmp_factorial_scalar",
    "cmp_factorial_vector",
    "cmp_product",
    "cmp_standard",
    "enumerate_characters",
    "factorial_scalar_key",
    "factorial_vector_key",
    "first_level",
    "join",
    "mod_one",
    "normal_factorial_form",
    "strata_preorder",
    "support_partition",
    "vector_first_level",
]


def mod_one(x: Fraction | int) -> Fraction:
    """Representative of x mod Z in the window (-1, 0]."""
    f = Fraction(x)
    return f - math.ceil(f)


class Rel(enum.Enum):
    """Outcome of a comparison; INCOMPARABLE only occurs for vector orders."""

    LT = "LT"
    EQ = "EQ"
    GT = "GT"
    INCOMPARABLE = "INCOMPARABLE"


@dataclass(frozen=True, order=False)
class Character:
    """A class in Q/Z stored as the reduced pair (p, q) meaning -p/q.

    The numeric value lies in (-1, 0]; zero is (0, 1).
    """

    p: int
    q: int

    def __post_init__(self) -> None:
        if self.q < 1 or not 0 <= self.p < self.q:
            raise ValueError(f"character pair out of range: ({self.p}, {self.q})")
        if math.gcd(self.p, self.q) != 1:
            raise ValueError(f"character pair not reduced: ({self.p}, {self.q})")

    @classmethod
    def of(cls, x: Fraction | int) -> "Character":
        """Canonical representative of x mod Z."""
        v = mod_one(x)
        return cls(-v.numerator, v.denominator) if v else cls(0, 1)

    @classmethod
    def zero(cls) -> "Character":
        return cls(0, 1)

    @classmethod
    def from_pair(cls, pair: Sequence[int]) -> "Character":
        p, q = pair
        return cls(int(p), int(q))

    @property
    def value(self) -> Fraction:
        return Fraction(-self.p, self.q)

    def is_zero(self) -> bool:
        return self.p == 0

    def to_pair(self) -> list[int]:
        return [self.p, self.q]

    def __str__(self) -> str:
        return "0" if self.p == 0 else f"-{self.p}/{self.q}"


CharVector = tuple[Character, ...]


def as_vector(entries: Iterable[Character | Fraction | int]) -> CharVector:
    """Coerce a sequence of characters or rationals to a character vector."""
    return tuple(e if isinstance(e, Character) else Character.of(e) for e in entries)


@dataclass(frozen=True)
class FactorialForm:
    """Expression of a character as -p/n! with n minimal; zero is (0, 1)."""

    p: int
    n: int

    def __post_init__(self) -> None:
        if self.n < 1 or self.p < 0:
            raise ValueError(f"invalid factorial form ({self.p}, {self.n})")
        red = Fraction(self.p, math.factorial(self.n))
        if self.p == 0:
            if self.n != 1:
                raise ValueError("zero must be written at level 1")
        elif red >= 1 or (self.n > 1 and math.factorial(self.n - 1) % red.denominator == 0):
            raise ValueError(f"({self.p}, {self.n}) is not a minimal-level form")

    @property
    def value(self) -> Fraction:
        return Fraction(-self.p, math.factorial(self.n))


def first_level(x: Character) -> int:
    """Minimal n >= 1 with x expressible over denominator n!."""
    n, f = 1, 1
    while f % x.q:
        n += 1
        f *= n
    return n


def normal_factorial_form(x: Character) -> FactorialForm:
    """Write x as -p/n! with n minimal (the character's first tower level)."""
    n = first_level(x)
    return FactorialForm(x.p * (math.factorial(n) // x.q), n)


def vector_first_level(chi: Sequence[Character]) -> int:
    """Minimal n with every coordinate expressible over denominator n!."""
    return max((first_level(c) for c in chi), default=1)


def cmp_standard(x: Character, y: Character) -> Rel:
    """Numeric order on (-1, 0]: -(r-1)/r < ... < -1/r < 0."""
    if x.value < y.value:
        return Rel.LT
    return Rel.EQ if x.value == y.value else Rel.GT


def _fiber(x: Character, n: int) -> Fraction:
    # Image of x under the collapse Z_{n!} -> Z_n, as a value in (-1, 0].
    return mod_one(x.value * math.factorial(n - 1))


def _strip_fiber(x: Character, n: int) -> Character:
    # Remainder of x in Z_{(n-1)!} after removing the section -k/n -> -k/n!
    # of its fiber value -k/n.
    return Character.of(x.value - _fiber(x, n) / math.factorial(n - 1))


def cmp_factorial_scalar(x: Character, y: Character) -> Rel:
    """Total order on each Z_{n!}: deeper first appearance sorts earlier,
    then fiber position, then recursively the remainder one level down."""
    if x == y:
        return Rel.EQ
    nx, ny = first_level(x), first_level(y)
    if nx != ny:
        return Rel.LT if nx > ny else Rel.GT
    fx, fy = _fiber(x, nx), _fiber(y, nx)
    if fx != fy:
        return Rel.LT if fx < fy else Rel.GT
    return cmp_factorial_scalar(_strip_fiber(x, nx), _strip_fiber(y, nx))


@lru_cache(maxsize=None)
def factorial_scalar_key(x: Character) -> tuple:
    """Injective sort key equivalent to cmp_factorial_scalar.

    Flattens the comparison chain into (-level, fiber, -level, fiber, ...)
    and terminates with 1, which exceeds every real entry so that an element
    whose chain ends early sorts after one that continues.
    """
    out: list[int | Fraction] = []
    while not x.is_zero():
        n = first_level(x)
        out.append(-n)
        out.append(_fiber(x, n))
        x = _strip_fiber(x, n)
    out.append(1)
    return tuple(out)


def cmp_factorial_vector(chi: Sequence[Character], psi: Sequence[Character]) -> Rel:
    """Partial order on character vectors: compare first appearance levels,
    then componentwise scalar order when the levels agree."""
    if len(chi) != len(psi):
        raise LengthMismatch(f"vector lengths differ: {len(chi)} vs {len(psi)}")
    n, m = vector_first_level(chi), vector_first_level(psi)
    if n != m:
        return Rel.LT if n > m else Rel.GT
    return _componentwise(tuple(cmp_factorial_scalar(a, b) for a, b in zip(chi, psi)))


def cmp_product(chi: Sequence[Character], psi: Sequence[Character]) -> Rel:
    """Componentwise numeric order on character vectors."""
    if len(chi) != len(psi):
        raise LengthMismatch(f"vector lengths differ: {len(chi)} vs {len(psi)}")
    return _componentwise(tuple(cmp_standard(a, b) for a, b in zip(chi, psi)))


def _componentwise(rels: tuple[Rel, ...]) -> Rel:
    if all(r is Rel.EQ for r in rels):
        return Rel.EQ
    if all(r in (Rel.LT, Rel.EQ) for r in rels):
        return Rel.LT
    if all(r in (Rel.GT, Rel.EQ) for r in rels):
        return Rel.GT
    return Rel.INCOMPARABLE


def factorial_vector_key(chi: Sequence[Character]) -> tuple:
    """Deterministic total key refining cmp_factorial_vector.

    Level first (deeper earlier), then coordinate keys lexicographically; the
    lexicographic step also fixes an output order for incomparable vectors.
    """
    return (-vector_first_level(chi), tuple(factorial_scalar_key(c) for c in chi))


class Preorder:
    """Finite preorder: opaque labels plus a reflexive transitive relation.

    The relation is stored as one bitmask per element; bit j of row i records
    elements[i] <= elements[j].
    """

    def __init__(self, elements: Sequence, rows: Sequence[int]):
        self.elements = tuple(elements)
        self._index = {e: i for i, e in enumerate(self.elements)}
        if len(self._index) != len(self.elements):
            raise ValueError("duplicate labels in preorder")
        if len(rows) != len(self.elements):
            raise ValueError("relation size does not match element count")
        self._rows = tuple(int(r) for r in rows)
        n = len(self.elements)
        for i, row in enumerate(self._rows):
            if row >> n:
                raise ValueError("relation row addresses unknown elements")
            if not row & (1 << i):
                raise ValueError(f"relation not reflexive at {self.elements[i]!r}")
        for i, row in enumerate(self._rows):
            r = row
            while r:
                j = (r & -r).bit_length() - 1
                r &= r - 1
                if self._rows[j] & ~row:
                    raise ValueError(
                        f"relation not transitive through {self.elements[j]!r}"
                    )

    @classmethod
    def from_pairs(cls, elements: Sequence, pairs: Iterable[tuple], *, close: bool = False) -> "Preorder":
        """Build from (below, above) label pairs.  With close=True the
        reflexive transitive closure is taken; otherwise the pairs must
        already form a preorder."""
        index = {e: i for i, e in enumerate(elements)}
        rows = [1 << i for i in range(len(elements))]
        for a, b in pairs:
            rows[index[a]] |= 1 << index[b]
        if close:
            changed = True
            while changed:
                changed = False
                for i in range(len(rows)):
                    r, acc = rows[i], rows[i]
                    while r:
                        j = (r & -r).bit_length() - 1
                        r &= r - 1
                        acc |= rows[j]
                    if acc != rows[i]:
                        rows[i] = acc
                        changed = True
        return cls(elements, rows)

    @classmethod
    def antichain(cls, elements: Sequence) -> "Preorder":
        return cls(elements, [1 << i for i in range(len(elements))])

    @classmethod
    def chain(cls, elements: Sequence) -> "Preorder":
        n = len(elements)
        full = (1 << n) - 1
        return cls(elements, [full ^ ((1 << i) - 1) for i in range(n)])

    def __len__(self) -> int:
        return len(self.elements)

    def leq(self, a, b) -> bool:
        return bool(self._rows[self._index[a]] & (1 << self._index[b]))

    def pairs(self) -> list[tuple[int, int]]:
        """All related index pairs (i, j) with elements[i] <= elements[j]."""
        out = []
        for i, row in enumerate(self._rows):
            r = row
            while r:
                j = (r & -r).bit_length() - 1
                r &= r - 1
                out.append((i, j))
        return out

    def rows(self) -> tuple[int, ...]:
        return self._rows

    def to_json(self) -> dict:
        return {
            "elements": [_encode_label(e) for e in self.elements],
            "pairs": [list(p) for p in self.pairs()],
        }

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Preorder)
            and self.elements == other.elements
            and self._rows == other._rows
        )

    def __repr__(self) -> str:
        return f"Preorder({len(self.elements)} elements, {len(self.pairs())} pairs)"


def _encode_label(label):
    if isinstance(label, frozenset):
        return sorted(label)
    if isinstance(label, tuple):
        return [_encode_label(x) for x in label]
    return label


def join(first: Preorder, second: Preorder) -> Preorder:
    """Disjoint union keeping internal relations, with every element of the
    first preorder below every element of the second.

    Colliding labels are disambiguated by wrapping as (1, label) on the first
    side and (2, label) on the second.
    """
    left, right = first.elements, second.elements
    if set(left) & set(right):
        left = tuple((1, e) for e in left)
        right = tuple((2, e) for e in right)
    n, m = len(left), len(right)
    above = ((1 << m) - 1) << n
    rows = [row | above for row in first.rows()]
    rows += [row << n for row in second.rows()]
    return Preorder(left + right, rows)


def strata_preorder(components: Iterable, ambient_dim: int) -> Preorder:
    """Preorder on subsets of the component set: larger subsets (deeper
    strata) come first, subsets of equal size are mutually related.

    Warns when ambient_dim is less than the component count, where distinct
    strata of a crossings divisor could not all be nonempty.
    """
    labels = tuple(components)
    if len(set(labels)) != len(labels):
        raise ValueError("component labels must be distinct")
    if ambient_dim < len(labels):
        warnings.warn(
            f"ambient dimension {ambient_dim} below component count {len(labels)}",
            stacklevel=2,
        )
    subsets = [frozenset(s) for s in _subsets(labels)]
    subsets.sort(key=lambda s: (-len(s), sorted(map(_sort_token, s))))
    rows = []
    for s in subsets:
        row = 0
        for j, t in enumerate(subsets):
            if len(s) >= len(t):
                row |= 1 << j
        rows.append(row)
    return Preorder(subsets, rows)


def _subsets(labels: tuple) -> Iterable[tuple]:
    for mask in range(1 << len(labels)):
        yield tuple(l for i, l in enumerate(labels) if mask >> i & 1)


def _sort_token(label):
    # Stable sort token for mixed label types; ints sort numerically.
    if isinstance(label, int) and not isinstance(label, bool):
        return (0, label)
    return (1, str(label))


def enumerate_characters(
    orders: Sequence[int],
    support: Iterable[int],
    star: bool = False,
    prime_to: Optional[int] = None,
) -> list[CharVector]:
    """Character vectors over Z_{r_1} x ... x Z_{r_k} supported in a subset.

    Components are numbered 1..k.  Coordinates inside `support` range over
    Z_{r_j} (or Z_{r_j} minus zero when star=True); the rest are zero.  With
    prime_to=p only vectors whose reduced denominators are all coprime to p
    are kept.  Output is sorted by factorial_vector_key, so it lists deeper
    characters first, compatibly with the factorial order.
    """
    orders = [int(r) for r in orders]
    if any(r < 1 for r in orders):
        raise ValueError("cyclic orders must be positive")
    chosen = sorted(set(int(j) for j in support))
    if chosen and not (1 <= chosen[0] and chosen[-1] <= len(orders)):
        raise ValueError(f"support indices out of range 1..{len(orders)}: {chosen}")
    if prime_to is not None and not _is_prime(prime_to):
        raise ValueError(f"prime_to must be prime, got {prime_to}")

    zero = Character.zero()
    axes: list[list[Character]] = []
    for j in chosen:
        r = orders[j - 1]
        col = [Character.of(Fraction(-k, r)) for k in range(r - 1, -1, -1)]
        if star:
            col = [c for c in col if not c.is_zero()]
        if prime_to is not None:
            col = [c for c in col if c.q % prime_to != 0]
        axes.append(col)

    out: list[CharVector] = []
    for combo in product(*axes):
        vec = [zero] * len(orders)
        for j, c in zip(chosen, combo):
            vec[j - 1] = c
        out.append(tuple(vec))
    out.sort(key=factorial_vector_key)
    return out


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def support_partition(chi: Sequence[Character]) -> frozenset[int]:
    """Indices (1-based) of the nonzero coordinates: the unique support set
    placing the vector in the disjoint decomposition by supports."""
    return frozenset(i + 1 for i, c in enumerate(chi) if not c.is_zero())

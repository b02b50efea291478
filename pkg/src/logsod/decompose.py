"""Additive-invariant decompositions over crossings complexes.

Values are opaque additive data keyed by stratum name: plain integers,
fixed-length integer vectors, or integer polynomials.  Every operation here
reduces to the same shape — a base value plus counted copies of stratum
values — with the count coming from the character enumeration appropriate
to the level, truncation, fixed-locus, or prime-to-p variant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Union

from logsod.complexes import (
    FixedLocusData,
    NcComplex,
    SimplicialChart,
    SncComplex,
    canonical_root_pair,
    fixed_locus_index,
)
from logsod.errors import (
    MissingValue,
    ParseError,
    UnsupportedAction,
    UnsupportedConfiguration,
)
from logsod.orders import enumerate_characters
from logsod.psod import psod_nc

__all__ = [
    "DecompositionReport",
    "InvariantAssignment",
    "ReportRow",
    "decompose_finite",
    "decompose_kfl",
    "decompose_nc",
    "decompose_simplicial_complexified",
    "etale_filter",
    "prime_to_part",
    "value_add",
    "value_scale",
]

Value = Union[int, tuple]

VALUE_SYSTEMS = ("int", "int_vector", "poly")


def _normalize_value(system: str, v) -> Value:
    if system == "int":
        if isinstance(v, bool) or not isinstance(v, int):
            raise ValueError(f"int value expected, got {v!r}")
        return v
    entries = tuple(int(x) for x in v)
    if system == "int_vector":
        return entries
    while entries and entries[-1] == 0:
        entries = entries[:-1]
    return entries


def value_add(system: str, a: Value, b: Value) -> Value:
    if system == "int":
        return a + b
    if system == "int_vector":
        if len(a) != len(b):
            raise ValueError("vector values must share one length")
        return tuple(x + y for x, y in zip(a, b))
    width = max(len(a), len(b))
    padded = tuple(
        (a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)
        for i in range(width)
    )
    return _normalize_value("poly", padded)


def value_scale(system: str, k: int, a: Value) -> Value:
    if k < 0:
        raise ValueError("scaling must be by a non-negative integer")
    if system == "int":
        return k * a
    return _normalize_value(system, tuple(k * x for x in a))


def _value_zero(system: str, like: Value) -> Value:
    if system == "int":
        return 0
    if system == "int_vector":
        return (0,) * len(like)
    return ()


def render_value(system: str, v: Value) -> str:
    if system == "int":
        return str(v)
    if system == "int_vector":
        return "(" + ",".join(str(x) for x in v) + ")"
    if not v:
        return "0"
    terms = []
    for i, c in enumerate(v):
        if c == 0:
            continue
        if i == 0:
            terms.append(str(c))
        elif i == 1:
            terms.append(f"{c}t" if c != 1 else "t")
        else:
            terms.append(f"{c}t^{i}" if c != 1 else f"t^{i}")
    return " + ".join(terms) if terms else "0"


@dataclass(frozen=True)
class InvariantAssignment:
    """Stratum-name-keyed values in one additive value system.

    The invariant tag ("K", "G", ...) only documents what the numbers mean;
    it is carried through to reports unchanged.
    """

    value_system: str
    values: Mapping[str, Value]
    invariant: str = "K"

    def __post_init__(self) -> None:
        if self.value_system not in VALUE_SYSTEMS:
            raise ValueError(f"unknown value system {self.value_system!r}")
        normalized = {
            str(k): _normalize_value(self.value_system, v)
            for k, v in self.values.items()
        }
        if self.value_system == "int_vector" and normalized:
            widths = {len(v) for v in normalized.values()}
            if len(widths) > 1:
                raise ValueError("vector values must share one length")
        object.__setattr__(self, "values", normalized)

    def value_of(self, key: str) -> Value:
        if key not in self.values:
            raise MissingValue(f"no value assigned to stratum {key!r}")
        return self.values[key]

    @classmethod
    def from_json(cls, data: dict) -> "InvariantAssignment":
        try:
            return cls(
                value_system=data["value_system"],
                values=dict(data["values"]),
                invariant=data.get("invariant", "K"),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"bad assignment payload: {exc}") from exc

    def to_json(self) -> dict:
        out_values = {
            k: (v if self.value_system == "int" else list(v))
            for k, v in sorted(self.values.items())
        }
        return {
            "value_system": self.value_system,
            "values": out_values,
            "invariant": self.invariant,
        }


@dataclass(frozen=True)
class ReportRow:
    stratum: str
    count: int
    value: Value
    contribution: Value
    counting_function: Optional[str] = None


@dataclass(frozen=True)
class DecompositionReport:
    kind: str
    value_system: str
    invariant: str
    base_value: Value
    rows: tuple[ReportRow, ...]
    total: Value
    level: Optional[tuple[int, ...]] = None
    truncation: Optional[int] = None
    notes: tuple[str, ...] = ()

    def _encode(self, v: Value):
        return v if self.value_system == "int" else list(v)

    def to_json(self) -> dict:
        rows = []
        for r in self.rows:
            row = {
                "stratum": r.stratum,
                "count": r.count,
                "value": self._encode(r.value),
                "contribution": self._encode(r.contribution),
            }
            if r.counting_function is not None:
                row["counting_function"] = r.counting_function
            rows.append(row)
        out = {
            "kind": self.kind,
            "value_system": self.value_system,
            "invariant": self.invariant,
            "base": self._encode(self.base_value),
            "rows": rows,
            "total": self._encode(self.total),
            "notes": list(self.notes),
        }
        if self.level is not None:
            out["level"] = list(self.level)
        if self.truncation is not None:
            out["truncation"] = self.truncation
        return out

    def to_text(self) -> str:
        header = f"{self.kind} decomposition of {self.invariant} ({self.value_system})"
        if self.level is not None:
            header += f" at level {list(self.level)}"
        if self.truncation is not None:
            header += f", truncation {self.truncation}"
        cells = [("stratum", "count", "value", "contribution")]
        cells.append(("X", "1", render_value(self.value_system, self.base_value),
                      render_value(self.value_system, self.base_value)))
        for r in self.rows:
            count = str(r.count)
            if r.counting_function:
                count = f"{r.count} [{r.counting_function}]"
            cells.append((
                r.stratum,
                count,
                render_value(self.value_system, r.value),
                render_value(self.value_system, r.contribution),
            ))
        widths = [max(len(row[i]) for row in cells) for i in range(4)]
        lines = [header]
        for row in cells:
            lines.append("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip())
        lines.append(f"total: {render_value(self.value_system, self.total)}")
        lines.extend(self.notes)
        return "\n".join(lines)


def _label_sort_key(j: frozenset):
    def token(x):
        return (0, x) if isinstance(x, int) and not isinstance(x, bool) else (1, str(x))

    return (len(j), tuple(sorted(token(c) for c in j)))


def _proper_strata(cx: SncComplex) -> list[frozenset]:
    return sorted(cx.strata(proper=True), key=_label_sort_key)


def decompose_finite(
    cx: SncComplex, level: Iterable[int], v: InvariantAssignment
) -> DecompositionReport:
    """Finite-level splitting: v(X) plus, per nonempty stratum, the product
    of (r_j - 1) over its components, many copies of the stratum value."""
    level = tuple(int(r) for r in level)
    if len(level) != len(cx.components):
        raise ValueError("one cyclic order per component required")
    if any(r < 1 for r in level):
        raise ValueError("cyclic orders must be positive")
    index = {c: i for i, c in enumerate(cx.components)}
    base = v.value_of("X")
    total = base
    rows = []
    for j in _proper_strata(cx):
        mult = 1
        for c in j:
            mult *= level[index[c]] - 1
        val = v.value_of(cx.stratum_name(j))
        contrib = value_scale(v.value_system, mult, val)
        total = value_add(v.value_system, total, contrib)
        rows.append(ReportRow(cx.stratum_name(j), mult, val, contrib))
    return DecompositionReport(
        kind="finite",
        value_system=v.value_system,
        invariant=v.invariant,
        base_value=base,
        rows=tuple(rows),
        total=total,
        level=level,
        notes=("total = v(X) + sum over nonempty strata of prod_j (r_j - 1) * v(D_J)",),
    )


def decompose_kfl(
    cx: SncComplex, v: InvariantAssignment, truncation: int
) -> DecompositionReport:
    """Kummer-flat truncation: counting functions (n!-1)^|J| per stratum,
    evaluated at the given stage of the tower."""
    if truncation < 1:
        raise ValueError("truncation must be a positive integer")
    fact = math.factorial(truncation)
    base = v.value_of("X")
    total = base
    rows = []
    for j in _proper_strata(cx):
        mult = (fact - 1) ** len(j)
        val = v.value_of(cx.stratum_name(j))
        contrib = value_scale(v.value_system, mult, val)
        total = value_add(v.value_system, total, contrib)
        rows.append(
            ReportRow(
                cx.stratum_name(j), mult, val, contrib,
                counting_function=f"(n!-1)^{len(j)}",
            )
        )
    return DecompositionReport(
        kind="kfl",
        value_system=v.value_system,
        invariant=v.invariant,
        base_value=base,
        rows=tuple(rows),
        total=total,
        level=(fact,) * len(cx.components),
        truncation=truncation,
        notes=(
            "untruncated: one copy of v(D_J) per nonzero character vector "
            "supported on J over Q/Z",
        ),
    )


def decompose_nc(
    nc: NcComplex, v: InvariantAssignment, truncation: int
) -> DecompositionReport:
    """Splitting of an nc pair through its strictification.

    Gerbe labels are aggregated by the normalized strata they live on; the
    base contributes v(X) plus the blow-up copies of each center (codim - 1
    per step).  The per-stratum multiplicities depend on the strictification
    order, which this package fixes, so they are reproducible here but not
    canonical.
    """
    desc = psod_nc(nc, truncation)
    mults: dict[str, int] = {}
    for lab in desc.labels:
        if lab.provenance == "BaseStack" or lab.zero:
            continue
        if lab.normalized is None:
            raise UnsupportedConfiguration(
                f"stratum {sorted(lab.stratum, key=str)} has no crossing records "
                "to aggregate by"
            )
        for name, k in lab.normalized:
            mults[name] = mults.get(name, 0) + k
    base = v.value_of("X")
    total = base
    rows = []
    for center, copies in desc.base_breakdown or ():
        val = v.value_of(center)
        contrib = value_scale(v.value_system, copies, val)
        total = value_add(v.value_system, total, contrib)
        rows.append(ReportRow(center, copies, val, contrib, counting_function="blow-up"))
    for name in sorted(mults):
        val = v.value_of(name)
        contrib = value_scale(v.value_system, mults[name], val)
        total = value_add(v.value_system, total, contrib)
        rows.append(ReportRow(name, mults[name], val, contrib))
    return DecompositionReport(
        kind="nc",
        value_system=v.value_system,
        invariant=v.invariant,
        base_value=base,
        rows=tuple(rows),
        total=total,
        level=desc.level,
        truncation=truncation,
        notes=(
            "multiplicities are truncations induced by the fixed "
            "strictification and are construction-dependent",
        ),
    )


def decompose_simplicial_complexified(
    chart: SimplicialChart,
    fixed: FixedLocusData,
    g: InvariantAssignment,
    truncation: int,
) -> DecompositionReport:
    """Complexified splitting over a simplicial chart: each stratum of the
    canonical root pair is counted with its fixed-locus-corrected index."""
    snc, data = canonical_root_pair(chart)
    if fixed.components != data.components:
        raise UnsupportedAction(
            "fixed-locus data does not match the chart's canonical root pair"
        )
    base = g.value_of("X")
    total = base
    rows = []
    for j in _proper_strata(snc):
        mult = fixed_locus_index(fixed, j, truncation)
        val = g.value_of(snc.stratum_name(j))
        contrib = value_scale(g.value_system, mult, val)
        total = value_add(g.value_system, total, contrib)
        rows.append(
            ReportRow(
                snc.stratum_name(j), mult, val, contrib,
                counting_function="|Z*_S| + fixed-locus copies",
            )
        )
    return DecompositionReport(
        kind="simplicial-complexified",
        value_system=g.value_system,
        invariant=g.invariant,
        base_value=base,
        rows=tuple(rows),
        total=total,
        truncation=truncation,
        notes=(
            "coefficient of S counts truncated characters on S plus one set "
            "per group element fixing S",
        ),
    )


def prime_to_part(r: int, p: int) -> int:
    """Largest divisor of r coprime to p."""
    if r < 1:
        raise ValueError("order must be positive")
    while r % p == 0:
        r //= p
    return r


def etale_filter(
    cx: SncComplex,
    v: InvariantAssignment,
    p: int,
    level: Optional[Iterable[int]] = None,
    truncation: Optional[int] = None,
) -> DecompositionReport:
    """Prime-to-p variant: counts keep only characters whose reduced
    denominators are coprime to p, via the order-enumeration filter.

    Exactly one of level and truncation must be given; a truncation n means
    the diagonal n! level with the same filter applied.
    """
    if (level is None) == (truncation is None):
        raise ValueError("give exactly one of level and truncation")
    if truncation is not None:
        level = (math.factorial(truncation),) * len(cx.components)
    level = tuple(int(r) for r in level)
    if len(level) != len(cx.components):
        raise ValueError("one cyclic order per component required")
    index = {c: i for i, c in enumerate(cx.components)}
    base = v.value_of("X")
    total = base
    rows = []
    for j in _proper_strata(cx):
        orders = [level[index[c]] for c in sorted(j, key=lambda c: index[c])]
        mult = len(
            enumerate_characters(
                orders, range(1, len(orders) + 1), star=True, prime_to=p
            )
        )
        val = v.value_of(cx.stratum_name(j))
        contrib = value_scale(v.value_system, mult, val)
        total = value_add(v.value_system, total, contrib)
        rows.append(
            ReportRow(
                cx.stratum_name(j), mult, val, contrib,
                counting_function="prime-to-%d" % p,
            )
        )
    return DecompositionReport(
        kind="etale",
        value_system=v.value_system,
        invariant=v.invariant,
        base_value=base,
        rows=tuple(rows),
        total=total,
        level=level,
        truncation=truncation,
        notes=(f"characters with denominator divisible by {p} are dropped",),
    )

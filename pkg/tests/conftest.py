"""Shared fixtures: the curated monoid library with frozen expected values."""

from dataclasses import dataclass, field

import pytest

from logsod.monoids import ToricMonoid


@dataclass(frozen=True)
class MonoidCase:
    """One library entry with independently computed expected values."""

    name: str
    monoid: ToricMonoid
    rays: tuple[tuple[int, ...], ...]
    root_orders: tuple[int, ...]
    quotient: tuple[int, ...]
    indecomposables: tuple[tuple[int, ...], ...] = ()


def _case(name, gens, rays, c, quot, indec=()):
    return MonoidCase(
        name,
        ToricMonoid(len(gens[0]), tuple(gens)),
        tuple(rays),
        tuple(c),
        tuple(quot),
        tuple(indec),
    )


# Expected values frozen from first-principles oracle computations: extremal
# rays via facet enumeration, root orders via coefficient denominators,
# quotients via determinant/elementary-divisor calculations done by hand or
# by an independent script, minimality by divisor-wise brute force.
MONOID_LIBRARY = [
    _case("free-rank1", [(1,)], [(1,)], [1], [], [(1,)]),
    _case("scaled-rank1", [(3,)], [(3,)], [1], [], [(3,)]),
    _case("free-rank2", [(1, 0), (0, 1)], [(0, 1), (1, 0)], [1, 1], [],
          [(0, 1), (1, 0)]),
    _case("half-diagonal-surface", [(2, 0), (1, 1), (0, 2)],
          [(0, 2), (2, 0)], [2, 2], [2], [(0, 2), (1, 1), (2, 0)]),
    _case("third-chart", [(1, 0), (1, 1), (1, 2), (1, 3)],
          [(1, 0), (1, 3)], [3, 3], [3],
          [(1, 0), (1, 1), (1, 2), (1, 3)]),
    _case("quarter-chart", [(1, 0), (1, 1), (1, 2), (1, 3), (1, 4)],
          [(1, 0), (1, 4)], [4, 4], [4],
          [(1, 0), (1, 1), (1, 2), (1, 3), (1, 4)]),
    _case("sixth-chart",
          [(1, 0), (1, 1), (1, 2), (1, 3), (1, 4), (1, 5), (1, 6)],
          [(1, 0), (1, 6)], [6, 6], [6]),
    _case("steep-interior", [(1, 0), (1, 1), (2, 3)],
          [(1, 0), (2, 3)], [3, 3], [3], [(1, 0), (1, 1), (2, 3)]),
    _case("symmetric-thirds", [(2, 1), (1, 1), (1, 2)],
          [(1, 2), (2, 1)], [3, 3], [3], [(1, 1), (1, 2), (2, 1)]),
    _case("half-quarter", [(4, 0), (2, 1), (0, 2)],
          [(0, 2), (4, 0)], [2, 2], [2], [(0, 2), (2, 1), (4, 0)]),
    _case("surface-times-line", [(2, 0, 0), (1, 1, 0), (0, 2, 0), (0, 0, 1)],
          [(0, 0, 1), (0, 2, 0), (2, 0, 0)], [1, 2, 2], [2],
          [(0, 0, 1), (0, 2, 0), (1, 1, 0), (2, 0, 0)]),
    _case("doubled-simplex", [(1, 1, 0), (1, 0, 1), (0, 1, 1), (1, 1, 1)],
          [(0, 1, 1), (1, 0, 1), (1, 1, 0)], [2, 2, 2], [2, 2],
          [(0, 1, 1), (1, 0, 1), (1, 1, 0), (1, 1, 1)]),
    _case("half-diagonal-space", [(2, 0, 0), (0, 2, 0), (0, 0, 2), (1, 1, 1)],
          [(0, 0, 2), (0, 2, 0), (2, 0, 0)], [2, 2, 2], [2, 2],
          [(0, 0, 2), (0, 2, 0), (1, 1, 1), (2, 0, 0)]),
    _case("mixed-orders",
          [(0, 0, 3), (0, 2, 0), (1, 1, 1), (2, 0, 2), (3, 1, 0), (4, 0, 1),
           (6, 0, 0)],
          [(0, 0, 3), (0, 2, 0), (6, 0, 0)], [3, 2, 6], [6],
          [(0, 0, 3), (0, 2, 0), (1, 1, 1), (2, 0, 2), (3, 1, 0), (4, 0, 1),
           (6, 0, 0)]),
]


SQUARE_CONE = ToricMonoid(3, ((0, 0, 1), (1, 0, 1), (0, 1, 1), (1, 1, 1)))

UNSATURATED = ToricMonoid(2, ((1, 0), (1, 1), (1, 3)))


@pytest.fixture(scope="session")
def monoid_library():
    return MONOID_LIBRARY

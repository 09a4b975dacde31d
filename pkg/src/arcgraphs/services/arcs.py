"""
arcs.py – Arc value types and the arc-level operations.

Two payloads exist:

* ``Chord``     – sorted pair of polygon vertices.
* ``NormalArc`` – normal coordinates over the interior edges of the reference
                  triangulation; an arc equal to edge ``e`` reads ``-1`` at
                  ``e`` and ``0`` elsewhere, so arc equality is vector equality.

The module-level functions take the surface explicitly and delegate to it.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator
from dataclasses import dataclass
from typing import TYPE_CHECKING, TypeAlias

if TYPE_CHECKING:
    from arcgraphs.services.surface import CutResult, Surface, SurfaceSpec


@dataclass(frozen=True, order=True)
class Chord:
    i: int
    j: int

    def __post_init__(self) -> None:
        if self.i > self.j:
            lo, hi = self.j, self.i
            object.__setattr__(self, "i", lo)
            object.__setattr__(self, "j", hi)

    def __str__(self) -> str:
        return f"{self.i}-{self.j}"

    @property
    def ends(self) -> tuple[int, int]:
        return (self.i, self.j)


@dataclass(frozen=True, order=True)
class NormalArc:
    coords: tuple[int, ...]

    def __str__(self) -> str:
        return "(" + ",".join(str(c) for c in self.coords) + ")"

    @property
    def weight(self) -> int:
        return sum(self.coords)

    @property
    def is_edge(self) -> bool:
        return -1 in self.coords


Arc: TypeAlias = Chord | NormalArc


@dataclass(frozen=True)
class OrientedArc:
    arc: Arc
    head: int

    def __str__(self) -> str:
        return f"{self.arc}→{self.head}"


@dataclass(frozen=True, order=True)
class Multiarc:
    """Canonically sorted tuple of arcs (validity is checked by the surface)."""

    arcs: tuple[Arc, ...]

    @classmethod
    def of(cls, arcs: Iterable[Arc]) -> Multiarc:
        return cls(tuple(sorted(arcs)))

    def __len__(self) -> int:
        return len(self.arcs)

    def __iter__(self) -> Iterator[Arc]:
        return iter(self.arcs)

    def __contains__(self, a: object) -> bool:
        return a in self.arcs

    def __str__(self) -> str:
        return "|".join(str(a) for a in self.arcs)

    def issubset(self, other: Multiarc) -> bool:
        return set(self.arcs) <= set(other.arcs)

    def without(self, a: Arc) -> Multiarc:
        return Multiarc(tuple(x for x in self.arcs if x != a))

    def with_arc(self, a: Arc) -> Multiarc:
        return Multiarc.of((*self.arcs, a))

    def union(self, other: Iterable[Arc]) -> Multiarc:
        return Multiarc.of(set(self.arcs) | set(other))

    def intersection(self, other: Multiarc) -> Multiarc:
        return Multiarc.of(set(self.arcs) & set(other.arcs))

    def minus(self, other: Multiarc) -> Multiarc:
        return Multiarc.of(set(self.arcs) - set(other.arcs))


EMPTY = Multiarc(())


@dataclass(frozen=True)
class ArcSet:
    """Result of an enumeration; ``complete`` only when certified."""

    arcs: tuple[Arc, ...]
    complete: bool
    bound: int | None = None

    def __len__(self) -> int:
        return len(self.arcs)

    def __iter__(self) -> Iterator[Arc]:
        return iter(self.arcs)


@dataclass(frozen=True)
class TopologicalType:
    separating: bool
    ear: bool
    components: tuple[SurfaceSpec, ...]


# ── Operations ───────────────────────────────────────────────────────────────


def enumerate_arcs(surface: Surface, bound: int | None = None) -> ArcSet:
    return surface.enumerate_arcs(bound)


def intersection_number(surface: Surface, a: Arc, b: Arc) -> int:
    return surface.intersection_number(a, b)


def is_ear(surface: Surface, a: Arc) -> bool:
    return surface.is_ear(a)


def is_separating(surface: Surface, a: Arc) -> bool:
    return surface.is_separating(a)


def nice_pair(surface: Surface, a: Arc, b: Arc) -> bool:
    return surface.nice_pair(a, b)


def flip(surface: Surface, triangulation: Multiarc, e: Arc) -> Multiarc:
    return surface.flip(triangulation, e)


def topological_type(surface: Surface, a: Arc) -> TopologicalType:
    return surface.topological_type(a)


def cut_along(surface: Surface, arcs: Iterable[Arc]) -> CutResult:
    return surface.cut(tuple(arcs))

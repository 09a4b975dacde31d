"""
polygon.py – The exact backend: a disk with n marked boundary points.

Arcs are diagonals ``Chord(i, j)``; two chords cross iff exactly one endpoint
of one lies strictly between the endpoints of the other. Cutting along a
multiarc splits the vertex cycle into sub-polygons, each of which keeps its
vertices in ascending order.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Any

from arcgraphs.services.arcs import ArcSet, Chord, Multiarc
from arcgraphs.services.errors import InvalidInput
from arcgraphs.services.surface import Backend, CutResult, Surface, SurfaceSpec

logger = logging.getLogger(__name__)


def chords_cross(a: Chord, b: Chord) -> bool:
    i, j = a.i, a.j
    k, l = b.i, b.j
    if i in (k, l) or j in (k, l):
        return False
    return (i < k < j) != (i < l < j)


class PolygonSurface(Surface):
    backend = Backend.POLYGON

    def __init__(self, n: int) -> None:
        if n < 3:
            raise InvalidInput(f"a polygon needs at least 3 vertices, got {n}")
        super().__init__(SurfaceSpec.polygon(n))
        self.n = n

    def __repr__(self) -> str:
        return f"PolygonSurface({self.n})"

    def is_peripheral(self, i: int, j: int) -> bool:
        return (j - i) % self.n in (0, 1, self.n - 1)

    @cached_property
    def arcs(self) -> tuple[Chord, ...]:
        n = self.n
        return tuple(
            Chord(i, j) for i in range(n) for j in range(i + 2, n) if not self.is_peripheral(i, j)
        )

    @cached_property
    def ears(self) -> tuple[Chord, ...]:
        if self.n < 4:
            return ()
        return tuple(sorted({Chord(i, (i + 2) % self.n) for i in range(self.n)}))

    # ── primitives ─────────────────────────────────────────────────────────

    def enumerate_arcs(self, bound: int | None = None) -> ArcSet:
        return ArcSet(arcs=self.arcs, complete=True, bound=None)

    def intersection_number(self, a: Chord, b: Chord) -> int:  # type: ignore[override]
        return 1 if chords_cross(a, b) else 0

    def check_arc(self, a: Any) -> None:
        if not isinstance(a, Chord):
            raise InvalidInput(f"{a!r} is not a polygon chord")
        if not (0 <= a.i < self.n and 0 <= a.j < self.n):
            raise InvalidInput(f"chord {a} leaves the {self.n}-gon")
        if self.is_peripheral(a.i, a.j):
            raise InvalidInput(f"chord {a} is peripheral")

    def endpoints(self, a: Chord) -> tuple[int, int]:  # type: ignore[override]
        return a.ends

    def arc_to_json(self, a: Chord) -> list[int]:  # type: ignore[override]
        return [a.i, a.j]

    def arc_from_json(self, obj: Any) -> Chord:
        if isinstance(obj, str):
            left, _, right = obj.partition("-")
            obj = [left, right]
        try:
            i, j = (int(x) for x in obj)
        except (TypeError, ValueError) as exc:
            raise InvalidInput(f"cannot read a chord from {obj!r}") from exc
        chord = Chord(i, j)
        self.check_arc(chord)
        return chord

    def faces(self, arcs: tuple[Chord, ...]) -> list[list[int]]:
        """Vertex lists of the sub-polygons cut out by pairwise disjoint chords."""
        faces = [list(range(self.n))]
        for chord in arcs:
            for idx, face in enumerate(faces):
                if chord.i in face and chord.j in face:
                    inner = [v for v in face if chord.i <= v <= chord.j]
                    outer = [v for v in face if v <= chord.i or v >= chord.j]
                    faces[idx : idx + 1] = [inner, outer]
                    break
            else:
                raise InvalidInput(f"chord {chord} does not lie in a single face")
        return faces

    def _cut(self, arcs: tuple[Chord, ...]) -> CutResult:  # type: ignore[override]
        for a in arcs:
            self.check_arc(a)
        for x, a in enumerate(arcs):
            for b in arcs[x + 1 :]:
                if a == b or chords_cross(a, b):
                    raise InvalidInput(f"cannot cut along crossing or repeated chords {a}, {b}")
        faces = sorted(self.faces(arcs))
        return CutResult(
            components=tuple(SurfaceSpec.polygon(len(f)) for f in faces),
            embeddings=tuple(tuple(f) for f in faces),
        )

    def flip(self, triangulation: Multiarc, e: Chord) -> Multiarc:  # type: ignore[override]
        if len(triangulation) != self.omega:
            raise InvalidInput(f"{triangulation} is not a triangulation of the {self.n}-gon")
        self.check_multiarc(triangulation)
        if e not in triangulation:
            raise InvalidInput(f"{e} is not an arc of {triangulation}")
        rest = triangulation.without(e)
        for face in self.faces(rest.arcs):
            if e.i in face and e.j in face:
                others = [v for v in face if v not in e.ends]
                if len(face) != 4 or len(others) != 2:
                    raise InvalidInput(f"{e} does not sit in a quadrilateral")
                return rest.with_arc(Chord(*others))
        raise InvalidInput(f"{e} is not flippable in {triangulation}")

    # ── symmetries ─────────────────────────────────────────────────────────

    def dihedral_group(self) -> list[Dihedral]:
        return [Dihedral(self.n, s, r) for r in (False, True) for s in range(self.n)]


@dataclass(frozen=True)
class Dihedral:
    """``i ↦ shift + i`` or, when ``reflect``, ``i ↦ shift − i`` (mod n)."""

    n: int
    shift: int = 0
    reflect: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "shift", self.shift % self.n)

    def __str__(self) -> str:
        kind = "s" if self.reflect else "r"
        return f"{kind}{self.shift}"

    def point(self, i: int) -> int:
        return (self.shift - i) % self.n if self.reflect else (self.shift + i) % self.n

    def apply(self, a: Chord) -> Chord:
        return Chord(self.point(a.i), self.point(a.j))

    def compose(self, other: Dihedral) -> Dihedral:
        """``self ∘ other``."""
        if self.n != other.n:
            raise InvalidInput("cannot compose symmetries of different polygons")
        if not self.reflect:
            return Dihedral(self.n, self.shift + other.shift, other.reflect)
        return Dihedral(self.n, self.shift - other.shift, not other.reflect)

    def inverse(self) -> Dihedral:
        if self.reflect:
            return self
        return Dihedral(self.n, -self.shift, False)

    @property
    def is_identity(self) -> bool:
        return self.shift == 0 and not self.reflect

    def permutation(self) -> tuple[int, ...]:
        return tuple(self.point(i) for i in range(self.n))


def catalan_triangulations(n: int) -> list[frozenset[Chord]]:
    """Independent recursive enumeration of the triangulations of an n-gon.

    Used as an oracle for the flip-graph builder: the triangle on the edge
    (0, n−1) has apex t, and the two sides recurse on the sub-polygons.
    """

    def rec(vertices: tuple[int, ...]) -> list[frozenset[Chord]]:
        if len(vertices) < 3:
            return [frozenset()]
        first, last = vertices[0], vertices[-1]
        out: list[frozenset[Chord]] = []
        for pos in range(1, len(vertices) - 1):
            apex = vertices[pos]
            own = set()
            if pos > 1:
                own.add(Chord(first, apex))
            if pos < len(vertices) - 2:
                own.add(Chord(apex, last))
            for left in rec(vertices[: pos + 1]):
                for right in rec(vertices[pos:]):
                    out.append(frozenset(own | left | right))
        return out

    return rec(tuple(range(n)))

"""
surface.py – Surface signatures, complexity arithmetic, the exceptional-surface
test, and the backend-independent ``Surface`` interface.

A concrete surface is one of two backends:

* ``PolygonSurface``      – a disk with n marked boundary points; arcs are chords.
* ``TriangulatedSurface`` – any valid signature; arcs are normal coordinates
                            relative to a reference triangulation.

Everything derived from cutting (ears, separation, nice pairs, topological
type) is implemented once here on top of the backend's ``cut``.
"""

from __future__ import annotations

import logging
from abc import ABC, abstractmethod
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from enum import StrEnum
from typing import TYPE_CHECKING, Any, ClassVar

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from arcgraphs.services.errors import InvalidInput

if TYPE_CHECKING:
    from arcgraphs.services.arcs import Arc, ArcSet, Multiarc, OrientedArc, TopologicalType

logger = logging.getLogger(__name__)


class Backend(StrEnum):
    POLYGON = "polygon"
    TRIANGULATED = "triangulated"


# ── Signatures ───────────────────────────────────────────────────────────────


class SurfaceSpec(BaseModel):
    """Genus / boundary / marked-point signature of a surface."""

    model_config = ConfigDict(frozen=True)

    genus: int = Field(0, ge=0)
    boundary_points: tuple[int, ...] = Field(
        default=(), description="marked points per boundary curve"
    )
    interior_points: int = Field(0, ge=0)

    @field_validator("boundary_points", mode="before")
    @classmethod
    def _as_tuple(cls, v: Any) -> tuple[int, ...]:
        return tuple(int(x) for x in v)

    @field_validator("boundary_points")
    @classmethod
    def _positive_counts(cls, v: tuple[int, ...]) -> tuple[int, ...]:
        if any(x < 1 for x in v):
            raise ValueError("every boundary curve needs at least one marked point")
        return v

    @model_validator(mode="after")
    def _has_marked_point(self) -> SurfaceSpec:
        if self.interior_points + sum(self.boundary_points) < 1:
            raise ValueError("a surface needs at least one marked point")
        return self

    @classmethod
    def polygon(cls, n: int) -> SurfaceSpec:
        return cls(genus=0, boundary_points=(n,), interior_points=0)

    @classmethod
    def punctured_sphere(cls, p: int) -> SurfaceSpec:
        return cls(genus=0, boundary_points=(), interior_points=p)

    @property
    def b(self) -> int:
        return len(self.boundary_points)

    @property
    def p(self) -> int:
        return self.interior_points

    @property
    def q(self) -> int:
        return sum(self.boundary_points)

    @property
    def omega(self) -> int:
        return complexity(self)

    @property
    def is_polygon(self) -> bool:
        return self.genus == 0 and self.b == 1 and self.p == 0

    def canonical(self) -> SurfaceSpec:
        """Same surface with boundary counts in ascending order."""
        return SurfaceSpec(
            genus=self.genus,
            boundary_points=tuple(sorted(self.boundary_points)),
            interior_points=self.interior_points,
        )

    def sort_key(self) -> tuple[int, int, int, tuple[int, ...]]:
        return (self.genus, self.b, self.p, tuple(sorted(self.boundary_points)))

    def describe(self) -> str:
        if self.is_polygon:
            names = {3: "triangle", 4: "quadrilateral", 5: "pentagon", 6: "hexagon"}
            return names.get(self.q, f"{self.q}-gon")
        return (
            f"S(g={self.genus}, b={self.b}, p={self.p}, "
            f"q={list(self.boundary_points)})"
        )


def complexity(spec: SurfaceSpec) -> int:
    """ω(S) = 6g + 3b + 3p + q − 6 (negative for degenerate signatures)."""
    return 6 * spec.genus + 3 * spec.b + 3 * spec.p + spec.q - 6


def is_exceptional(spec: SurfaceSpec) -> bool:
    """Genus ≤ 1 with at most three boundary components, isolated points included."""
    return spec.genus <= 1 and spec.b + spec.p <= 3


# ── Cutting ──────────────────────────────────────────────────────────────────


@dataclass(frozen=True)
class CutResult:
    """Components of S ∖ ν.

    ``embeddings[i][j]`` is the parent marked-point label of marked point ``j``
    of component ``i``.
    """

    components: tuple[SurfaceSpec, ...]
    embeddings: tuple[tuple[int, ...], ...]

    @property
    def positive(self) -> tuple[SurfaceSpec, ...]:
        return tuple(c for c in self.components if c.omega > 0)

    @property
    def total_complexity(self) -> int:
        # triangles count as 0 even though the formula gives 0 anyway
        return sum(max(c.omega, 0) for c in self.components)

    def has_triangle(self) -> bool:
        return any(c.canonical() == _TRIANGLE for c in self.components)


_TRIANGLE = SurfaceSpec.polygon(3)


# ── Backend interface ────────────────────────────────────────────────────────


class Surface(ABC):
    """A surface together with a concrete arc model."""

    backend: ClassVar[Backend]

    def __init__(self, spec: SurfaceSpec) -> None:
        self.spec = spec
        self._cut_memo: dict[tuple, CutResult] = {}

    @property
    def omega(self) -> int:
        return self.spec.omega

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.spec.describe()})"

    # ── backend primitives ─────────────────────────────────────────────────

    @abstractmethod
    def enumerate_arcs(self, bound: int | None = None) -> ArcSet: ...

    @abstractmethod
    def intersection_number(self, a: Arc, b: Arc) -> int: ...

    @abstractmethod
    def _cut(self, arcs: tuple[Arc, ...]) -> CutResult: ...

    @abstractmethod
    def flip(self, triangulation: Multiarc, e: Arc) -> Multiarc: ...

    @abstractmethod
    def check_arc(self, a: Arc) -> None:
        """Raise ``InvalidInput`` unless ``a`` is a canonical essential arc here."""

    @abstractmethod
    def arc_to_json(self, a: Arc) -> Any: ...

    @abstractmethod
    def arc_from_json(self, obj: Any) -> Arc: ...

    @abstractmethod
    def endpoints(self, a: Arc) -> tuple[int, int]:
        """Marked-point labels of both ends of ``a``."""

    # ── derived operations ─────────────────────────────────────────────────

    def disjoint(self, a: Arc, b: Arc) -> bool:
        return a != b and self.intersection_number(a, b) == 0

    def multiarc(self, arcs: Iterable[Arc]) -> Multiarc:
        """Canonical, validated multiarc."""
        from arcgraphs.services.arcs import Multiarc

        mu = Multiarc.of(arcs)
        self.check_multiarc(mu)
        return mu

    def check_multiarc(self, mu: Multiarc) -> None:
        if len(set(mu)) != len(mu):
            raise InvalidInput(f"repeated arc in {mu}")
        if len(mu) > self.omega:
            raise InvalidInput(f"{len(mu)} arcs exceed the complexity {self.omega}")
        for a in mu:
            self.check_arc(a)
        arcs = mu.arcs
        for i, a in enumerate(arcs):
            for b in arcs[i + 1 :]:
                if self.intersection_number(a, b) != 0:
                    raise InvalidInput(f"arcs {a} and {b} intersect")

    def multiarc_from_json(self, obj: Sequence[Any]) -> Multiarc:
        return self.multiarc(self.arc_from_json(x) for x in obj)

    def cut(self, arcs: Iterable[Arc]) -> CutResult:
        key = tuple(sorted(arcs))
        hit = self._cut_memo.get(key)
        if hit is None:
            hit = self._cut(key)
            self._cut_memo[key] = hit
        return hit

    def is_ear(self, a: Arc) -> bool:
        return self.cut((a,)).has_triangle()

    def is_separating(self, a: Arc) -> bool:
        return len(self.cut((a,)).components) > 1

    def is_nonseparating_or_ear(self, a: Arc) -> bool:
        return not self.is_separating(a) or self.is_ear(a)

    def nice_pair(self, a: Arc, b: Arc) -> bool:
        if a == b:
            raise InvalidInput("a nice pair needs two distinct arcs")
        if not self.disjoint(a, b):
            return False
        if not (self.is_nonseparating_or_ear(a) and self.is_nonseparating_or_ear(b)):
            return False
        return len(self.cut((a, b)).positive) == 1

    def topological_type(self, a: Arc) -> TopologicalType:
        from arcgraphs.services.arcs import TopologicalType

        result = self.cut((a,))
        comps = tuple(sorted((c.canonical() for c in result.components), key=SurfaceSpec.sort_key))
        return TopologicalType(
            separating=len(result.components) > 1,
            ear=result.has_triangle(),
            components=comps,
        )

    def arc_label(self, a: Arc) -> str:
        return str(a)

    def oriented(self, a: Arc, head: int) -> OrientedArc:
        from arcgraphs.services.arcs import OrientedArc

        if head not in self.endpoints(a):
            raise InvalidInput(f"{head} is not an endpoint of {a}")
        return OrientedArc(arc=a, head=head)


def open_surface(
    spec: SurfaceSpec, backend: Backend | str | None = None
) -> Surface:
    """Instantiate a surface, choosing POLYGON whenever the signature allows it."""
    from arcgraphs.services.polygon import PolygonSurface
    from arcgraphs.services.triangulated import TriangulatedSurface

    chosen = Backend(backend) if backend else (
        Backend.POLYGON if spec.is_polygon else Backend.TRIANGULATED
    )
    if chosen is Backend.POLYGON:
        if not spec.is_polygon:
            raise InvalidInput(f"{spec.describe()} is not a polygon")
        return PolygonSurface(spec.q)
    return TriangulatedSurface(spec)


def cut(surface: Surface, nu: Multiarc) -> CutResult:
    """Components of ``surface`` cut along every arc of ``nu``."""
    surface.check_multiarc(nu)
    return surface.cut(nu.arcs)

"""
triangulated.py – The general backend: arcs as normal coordinates.

Every arc is stored relative to a fixed reference triangulation T0 (see
``normal_coords.reference_triangulation``). Geometric questions are answered
by *realizing* arcs: flipping T0 until the arcs are edges, then reading the
answer off the combinatorial map.

Arc sets are infinite as soon as the surface is not a polygon, so
enumeration is bounded by coordinate sum and only certified complete when
the flip closure of T0 stays inside the enumerated pool.
"""

from __future__ import annotations

import logging
from collections import deque
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any

from arcgraphs.config import settings
from arcgraphs.services.arcs import ArcSet, Multiarc, NormalArc
from arcgraphs.services.errors import InvalidInput, SearchBoundExhausted
from arcgraphs.services.normal_coords import (
    CombinatorialTriangulation,
    compositions,
    cut_open,
    edge_of,
    flip_weights,
    flip_word_search,
    isometries,
    maps_along,
    reference_triangulation,
    trace,
    transport,
    unit_edge,
)
from arcgraphs.services.surface import Backend, CutResult, Surface, SurfaceSpec

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Realization:
    """A flip word from T0 after which every tracked arc is an edge."""

    word: tuple[int, ...]
    maps: tuple[CombinatorialTriangulation, ...]  # triangulation before each flip
    final: CombinatorialTriangulation
    edges: dict[NormalArc, int] = field(hash=False, compare=False)


class TriangulatedSurface(Surface):
    backend = Backend.TRIANGULATED

    def __init__(self, spec: SurfaceSpec) -> None:
        super().__init__(spec)
        self.reference = reference_triangulation(spec)
        self._ends: dict[NormalArc, tuple[int, int]] = {}
        self._realized: dict[tuple[NormalArc, ...], Realization] = {}
        self._crossings: dict[tuple[NormalArc, NormalArc], int] = {}
        self._pools: dict[int, ArcSet] = {}

    # ── coordinates ────────────────────────────────────────────────────────

    @property
    def marked_points(self) -> tuple[int, ...]:
        return self.reference.vertices

    def full(self, a: NormalArc) -> tuple[int, ...]:
        return a.coords + (0,) * len(self.reference.boundary)

    def edge_arc(self, e: int) -> NormalArc:
        return NormalArc(unit_edge(self.omega, e))

    @cached_property
    def reference_arcs(self) -> tuple[NormalArc, ...]:
        return tuple(self.edge_arc(e) for e in range(self.omega))

    def arc_of_edge(self, laminations: Sequence[tuple[int, ...]], f: int) -> NormalArc:
        """T0-coordinates of edge ``f`` given every T0 edge transported to the current map."""
        return NormalArc(tuple(lam[f] for lam in laminations))

    # ── validity ───────────────────────────────────────────────────────────

    def check_arc(self, a: Any) -> None:
        if not isinstance(a, NormalArc) or len(a.coords) != self.omega:
            raise InvalidInput(f"{a!r} is not a normal arc on {self.spec.describe()}")
        if a in self._ends:
            return
        if a.is_edge:
            if a.coords.count(-1) != 1 or any(c not in (0, -1) for c in a.coords):
                raise InvalidInput(f"{a} mixes an edge with crossings")
            e = a.coords.index(-1)
            ends = (self.reference.tail(e), self.reference.head(e))
        else:
            if min(a.coords) < 0:
                raise InvalidInput(f"{a} has negative coordinates")
            result = trace(self.reference, self.full(a))
            if not result.is_arc:
                raise InvalidInput(f"{a} is not a single essential arc")
            ends = (result.ends[0], result.ends[1])
        self._ends[a] = (min(ends), max(ends))

    def endpoints(self, a: NormalArc) -> tuple[int, int]:  # type: ignore[override]
        self.check_arc(a)
        return self._ends[a]

    def arc_to_json(self, a: NormalArc) -> dict[str, list[int]]:  # type: ignore[override]
        return {"coords": list(a.coords)}

    def arc_from_json(self, obj: Any) -> NormalArc:
        coords = obj.get("coords") if isinstance(obj, dict) else obj
        try:
            arc = NormalArc(tuple(int(c) for c in coords))
        except (TypeError, ValueError) as exc:
            raise InvalidInput(f"cannot read normal coordinates from {obj!r}") from exc
        self.check_arc(arc)
        return arc

    # ── realization ────────────────────────────────────────────────────────

    def realize(self, arcs: Iterable[NormalArc]) -> Realization:
        """Flip T0 until every arc of ``arcs`` (pairwise disjoint) is an edge."""
        key = tuple(sorted(arcs))
        hit = self._realized.get(key)
        if hit is not None:
            return hit
        T = self.reference
        word: list[int] = []
        maps: list[CombinatorialTriangulation] = []
        tracked = [self.full(a) for a in key]
        edges: dict[NormalArc, int] = {}
        frozen: set[int] = set()
        for idx, a in enumerate(key):
            steps = 0
            while -1 not in tracked[idx]:
                for e in self._shortening(T, tracked[idx], frozen):
                    tracked = [flip_weights(T, w, e) for w in tracked]
                    maps.append(T)
                    T = T.flip(e)
                    word.append(e)
                steps += 1
                if steps > settings.search_cap:
                    raise SearchBoundExhausted(f"could not realize {a} as an edge")
            e = tracked[idx].index(-1)
            if e in frozen:
                raise InvalidInput(f"{a} coincides with another arc of {key}")
            edges[a] = e
            frozen.add(e)
        hit = Realization(tuple(word), tuple(maps), T, edges)
        self._realized[key] = hit
        logger.debug("Realized %d arc(s) with %d flips", len(key), len(word))
        return hit

    def _shortening(
        self, T: CombinatorialTriangulation, w: tuple[int, ...], frozen: set[int]
    ) -> list[int]:
        """Flips strictly lowering the coordinate sum of ``w``, never touching ``frozen``."""
        current = sum(w)
        for e in T.interior_edges:
            if e in frozen or w[e] == 0 or not T.is_flippable(e):
                continue
            if sum(flip_weights(T, w, e)) < current:
                return [e]
        # no single flip helps: breadth-first over short flip words
        seen = {(T.triangles, w)}
        frontier: deque[tuple[CombinatorialTriangulation, tuple[int, ...], tuple[int, ...]]] = (
            deque([(T, w, ())])
        )
        visited = 0
        while frontier:
            node, weights, path = frontier.popleft()
            if len(path) >= settings.flip_search_depth:
                continue
            for e in node.interior_edges:
                if e in frozen or not node.is_flippable(e):
                    continue
                nw = flip_weights(node, weights, e)
                if sum(nw) < current:
                    return [*path, e]
                nxt = node.flip(e)
                if (nxt.triangles, nw) in seen:
                    continue
                seen.add((nxt.triangles, nw))
                frontier.append((nxt, nw, (*path, e)))
                visited += 1
                if visited > settings.search_cap:
                    break
        raise SearchBoundExhausted(
            f"no flip word of length ≤ {settings.flip_search_depth} shortens the arc"
        )

    # ── primitives ─────────────────────────────────────────────────────────

    def intersection_number(self, a: NormalArc, b: NormalArc) -> int:  # type: ignore[override]
        if a == b:
            return 0
        key = (a, b) if a <= b else (b, a)
        hit = self._crossings.get(key)
        if hit is not None:
            return hit
        for x in key:
            self.check_arc(x)
        r = self.realize((key[0],))
        w = transport(r.maps, r.word, self.full(key[1]))
        value = max(w[r.edges[key[0]]], 0)
        self._crossings[key] = value
        return value

    def enumerate_arcs(self, bound: int | None = None) -> ArcSet:
        bound = settings.default_arc_bound if bound is None else bound
        if bound < 0:
            raise InvalidInput("the coordinate bound must be nonnegative")
        hit = self._pools.get(bound)
        if hit is not None:
            return hit
        found: list[NormalArc] = list(self.reference_arcs)
        for total in range(1, bound + 1):
            for coords in compositions(total, self.omega):
                candidate = NormalArc(coords)
                try:
                    self.check_arc(candidate)
                except InvalidInput:
                    continue
                found.append(candidate)
        arcs = tuple(sorted(found))
        complete = self._closure_inside(set(arcs))
        pool = ArcSet(arcs=arcs, complete=complete, bound=bound)
        self._pools[bound] = pool
        logger.info(
            "Enumerated %d arcs on %s (bound %d, %s)",
            len(arcs),
            self.spec.describe(),
            bound,
            "complete" if complete else "bounded",
        )
        return pool

    def _closure_inside(self, pool: set[NormalArc]) -> bool:
        """True iff every triangulation flip-reachable from T0 uses only arcs of ``pool``."""
        start = [unit_edge(self.reference.num_edges, e) for e in range(self.omega)]
        seen = {frozenset(self.reference_arcs)}
        frontier = deque([(self.reference, start)])
        while frontier:
            T, lams = frontier.popleft()
            for e in T.interior_edges:
                if not T.is_flippable(e):
                    continue
                moved = [flip_weights(T, lam, e) for lam in lams]
                nxt = T.flip(e)
                arcs = frozenset(self.arc_of_edge(moved, f) for f in nxt.interior_edges)
                if arcs in seen:
                    continue
                if not arcs <= pool:
                    return False
                seen.add(arcs)
                if len(seen) > settings.closure_cap:
                    return False
                frontier.append((nxt, moved))
        return True

    def _cut(self, arcs: tuple[NormalArc, ...]) -> CutResult:  # type: ignore[override]
        for a in arcs:
            self.check_arc(a)
        for i, a in enumerate(arcs):
            for b in arcs[i + 1 :]:
                if a == b or self.intersection_number(a, b):
                    raise InvalidInput(f"cannot cut along intersecting or repeated arcs {a}, {b}")
        r = self.realize(arcs)
        pieces = cut_open(r.final, set(r.edges.values()))
        return CutResult(
            components=tuple(spec for spec, _ in pieces),
            embeddings=tuple(labels for _, labels in pieces),
        )

    def flip(self, triangulation: Multiarc, e: NormalArc) -> Multiarc:  # type: ignore[override]
        if len(triangulation) != self.omega:
            raise InvalidInput(f"{triangulation} is not a triangulation")
        self.check_multiarc(triangulation)
        if e not in triangulation:
            raise InvalidInput(f"{e} is not an arc of {triangulation}")
        r = self.realize(triangulation.arcs)
        edge = r.edges[e]
        if not r.final.is_flippable(edge):
            raise InvalidInput(f"{e} is the inner edge of a self-folded triangle")
        lams = [
            transport(r.maps, r.word, unit_edge(r.final.num_edges, t)) for t in range(self.omega)
        ]
        moved = [flip_weights(r.final, lam, edge) for lam in lams]
        return triangulation.without(e).with_arc(self.arc_of_edge(moved, edge))

    # ── mapping classes ────────────────────────────────────────────────────

    def mapping_classes(self, depth: int = 2, limit: int = 64) -> list[FlipIsometry]:
        """Non-trivial mapping classes found as flip words ending in a copy of T0."""
        found: list[FlipIsometry] = []
        signatures: set[tuple[NormalArc, ...]] = {self.reference_arcs}
        for word, T in flip_word_search(self.reference, depth, settings.search_cap):
            for mapping in isometries(T, self.reference):
                g = FlipIsometry(word=word, isometry=tuple(sorted(mapping.items())), surface=self)
                signature = tuple(g.apply(a) for a in self.reference_arcs)
                if signature in signatures:
                    continue
                signatures.add(signature)
                found.append(g)
                if len(found) >= limit:
                    return found
        logger.debug("Found %d mapping classes within %d flips", len(found), depth)
        return found


@dataclass(frozen=True)
class FlipIsometry:
    """Mapping class: flip T0 along ``word``, then relabel the result back onto T0."""

    word: tuple[int, ...]
    isometry: tuple[tuple[int, int], ...]  # (half-edge after the word, half-edge of T0)
    surface: TriangulatedSurface = field(compare=False, repr=False, hash=False)

    def __str__(self) -> str:
        return "flips[" + ",".join(str(e) for e in self.word) + "]"

    @cached_property
    def _maps(self) -> list[CombinatorialTriangulation]:
        return maps_along(self.surface.reference, self.word)

    def apply(self, a: NormalArc) -> NormalArc:
        maps = self._maps
        w = transport(maps[:-1], self.word, self.surface.full(a))
        out = [0] * len(w)
        for h, image in self.isometry:
            if h >= 0:
                out[edge_of(image)] = w[h]
        return NormalArc(tuple(out[: self.surface.omega]))

    def point_map(self) -> dict[int, int]:
        end = self._maps[-1]
        return {end.tail(h): self.surface.reference.tail(image) for h, image in self.isometry}

    @property
    def is_identity(self) -> bool:
        return all(self.apply(a) == a for a in self.surface.reference_arcs)

    def powers(self, a: NormalArc, times: int) -> Iterator[NormalArc]:
        """``a, g(a), g²(a), …`` (``times + 1`` arcs)."""
        yield a
        for _ in range(times):
            a = self.apply(a)
            yield a

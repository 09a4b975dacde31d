"""
multiarc_graph.py – The k-multiarc graph A^[k](S), strata, stars and B^[k](S).

Vertices are k-multiarcs. Two vertices are adjacent when they share k−1 arcs
ν and the exchanged arcs realize the least intersection number m(ν) that two
distinct arcs of S∖ν can have:

* m(ν) = 0 when S∖ν has two pieces of positive complexity, or one piece of
  complexity ≥ 2 (two disjoint arcs exist),
* m(ν) = 1 when the only positive piece is a quadrilateral,
* no edge through ν otherwise (fewer than two arcs live in S∖ν).

At k < ω this is disjointness of the exchanged arcs; at k = ω it is the
flip relation.
"""

from __future__ import annotations

import logging
from collections import defaultdict, deque
from collections.abc import Iterable, Iterator
from dataclasses import dataclass, field
from enum import StrEnum
from functools import cached_property
from itertools import combinations

import networkx as nx

from arcgraphs.config import settings
from arcgraphs.services.arcs import Arc, ArcSet, Multiarc
from arcgraphs.services.errors import InvalidInput, VertexCapExceeded
from arcgraphs.services.surface import Surface

logger = logging.getLogger(__name__)

EDGE_CONVENTION = "min-over-all-pairs"


class BuildMode(StrEnum):
    COMPLETE = "complete"
    BALL = "ball"


@dataclass(frozen=True)
class Completeness:
    complete: bool
    center: Multiarc | None = None
    radius: int | None = None
    arc_bound: int | None = None


@dataclass(eq=False)
class MultiarcGraph:
    """Explicit finite graph over canonically ordered multiarc vertices."""

    surface: Surface
    k: int
    vertices: tuple[Multiarc, ...]
    edges: tuple[tuple[int, int], ...]
    completeness: Completeness = field(default_factory=lambda: Completeness(True))
    convention: str = EDGE_CONVENTION

    def __post_init__(self) -> None:
        self.index: dict[Multiarc, int] = {v: i for i, v in enumerate(self.vertices)}
        adj: list[set[int]] = [set() for _ in self.vertices]
        for i, j in self.edges:
            adj[i].add(j)
            adj[j].add(i)
        self.adjacency: tuple[tuple[int, ...], ...] = tuple(tuple(sorted(a)) for a in adj)

    def __len__(self) -> int:
        return len(self.vertices)

    def __repr__(self) -> str:
        kind = "complete" if self.complete else f"ball(r={self.completeness.radius})"
        return (
            f"MultiarcGraph({self.surface.spec.describe()}, k={self.k}, "
            f"|V|={len(self.vertices)}, |E|={len(self.edges)}, {kind})"
        )

    @property
    def complete(self) -> bool:
        return self.completeness.complete

    def index_of(self, mu: Multiarc) -> int:
        try:
            return self.index[mu]
        except KeyError:
            raise InvalidInput(f"{mu} is not a vertex of {self!r}") from None

    def neighbors(self, i: int) -> tuple[int, ...]:
        return self.adjacency[i]

    def has_edge(self, i: int, j: int) -> bool:
        return j in self.adjacency[i]

    def degree(self, i: int) -> int:
        return len(self.adjacency[i])

    def label(self, i: int) -> str:
        return "|".join(self.surface.arc_label(a) for a in self.vertices[i])

    @cached_property
    def as_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(len(self.vertices)))
        g.add_edges_from(self.edges)
        return g

    def subgraph(self, indices: Iterable[int]) -> MultiarcGraph:
        keep = sorted(set(indices))
        renumber = {old: new for new, old in enumerate(keep)}
        edges = tuple(
            (renumber[i], renumber[j])
            for i, j in self.edges
            if i in renumber and j in renumber
        )
        return MultiarcGraph(
            surface=self.surface,
            k=self.k,
            vertices=tuple(self.vertices[i] for i in keep),
            edges=edges,
            completeness=self.completeness,
            convention=self.convention,
        )


# ── Edge predicate ───────────────────────────────────────────────────────────


def minimal_intersection(surface: Surface, nu: Multiarc) -> int | None:
    """m(ν), or ``None`` when S∖ν carries fewer than two distinct arcs."""
    positive = surface.cut(nu.arcs).positive
    if len(positive) >= 2:
        return 0
    if not positive:
        return None
    piece = positive[0]
    if piece.omega >= 2:
        return 0
    if piece.is_polygon and piece.q == 4:
        return 1
    return None


def adjacent(surface: Surface, mu1: Multiarc, mu2: Multiarc) -> bool:
    if len(mu1) != len(mu2):
        raise InvalidInput(f"cannot compare a {len(mu1)}-multiarc with a {len(mu2)}-multiarc")
    shared = mu1.intersection(mu2)
    if len(shared) != len(mu1) - 1:
        return False
    (a,) = mu1.minus(shared).arcs
    (b,) = mu2.minus(shared).arcs
    m = minimal_intersection(surface, shared)
    return m is not None and surface.intersection_number(a, b) == m


def _edges(surface: Surface, vertices: tuple[Multiarc, ...]) -> tuple[tuple[int, int], ...]:
    """Edges among ``vertices``, grouped by their shared (k−1)-multiarc."""
    groups: dict[Multiarc, list[tuple[int, Arc]]] = defaultdict(list)
    for i, mu in enumerate(vertices):
        for a in mu:
            groups[mu.without(a)].append((i, a))
    edges: set[tuple[int, int]] = set()
    for nu, members in groups.items():
        if len(members) < 2:
            continue
        m = minimal_intersection(surface, nu)
        if m is None:
            continue
        for (i, a), (j, b) in combinations(members, 2):
            if surface.intersection_number(a, b) == m:
                edges.add((min(i, j), max(i, j)))
    return tuple(sorted(edges))


# ── Construction ─────────────────────────────────────────────────────────────


def _check_k(surface: Surface, k: int) -> None:
    if not 1 <= k <= surface.omega:
        raise InvalidInput(f"k={k} outside 1..{surface.omega} for {surface.spec.describe()}")


def disjointness_graph(surface: Surface, pool: ArcSet | Iterable[Arc]) -> nx.Graph:
    arcs = list(pool)
    g = nx.Graph()
    g.add_nodes_from(arcs)
    for a, b in combinations(arcs, 2):
        if surface.disjoint(a, b):
            g.add_edge(a, b)
    return g


def all_multiarcs(surface: Surface, k: int, pool: ArcSet | Iterable[Arc]) -> Iterator[Multiarc]:
    """Every k-multiarc built from ``pool`` (k-cliques of the disjointness graph)."""
    for clique in nx.enumerate_all_cliques(disjointness_graph(surface, pool)):
        if len(clique) > k:
            return
        if len(clique) == k:
            yield Multiarc.of(clique)


def build(
    surface: Surface,
    k: int,
    mode: BuildMode | str = BuildMode.COMPLETE,
    *,
    center: Multiarc | None = None,
    radius: int | None = None,
    arc_bound: int | None = None,
) -> MultiarcGraph:
    _check_k(surface, k)
    mode = BuildMode(mode)
    if mode is BuildMode.BALL:
        return _build_ball(surface, k, center, radius, arc_bound)

    pool = surface.enumerate_arcs(arc_bound)
    if not pool.complete:
        raise InvalidInput(
            f"complete mode needs a finite certified arc set; {surface.spec.describe()} "
            "only supports ball mode"
        )
    vertices: list[Multiarc] = []
    for mu in all_multiarcs(surface, k, pool):
        vertices.append(mu)
        if len(vertices) > settings.vertex_cap:
            raise VertexCapExceeded(f"more than {settings.vertex_cap} vertices")
    ordered = tuple(sorted(vertices))
    graph = MultiarcGraph(surface, k, ordered, _edges(surface, ordered))
    logger.info("Built %r", graph)
    return graph


def exchange_neighbors(
    surface: Surface, mu: Multiarc, pool: Iterable[Arc], within: Multiarc | None = None
) -> Iterator[Multiarc]:
    """Neighbours of ``mu`` whose arcs come from ``pool`` and contain ``within``."""
    arcs = list(pool)
    for a in mu:
        if within is not None and a in within:
            continue
        nu = mu.without(a)
        m = minimal_intersection(surface, nu)
        if m is None:
            continue
        for b in arcs:
            if b in mu:
                continue
            if surface.intersection_number(a, b) != m:
                continue
            if all(surface.disjoint(b, c) for c in nu):
                yield nu.with_arc(b)


def _build_ball(
    surface: Surface,
    k: int,
    center: Multiarc | None,
    radius: int | None,
    arc_bound: int | None,
) -> MultiarcGraph:
    if center is None:
        raise InvalidInput("ball mode needs a center multiarc")
    if len(center) != k:
        raise InvalidInput(f"center {center} is not a {k}-multiarc")
    surface.check_multiarc(center)
    radius = settings.default_radius if radius is None else radius
    pool = surface.enumerate_arcs(arc_bound)
    dist = {center: 0}
    frontier = deque([center])
    while frontier:
        mu = frontier.popleft()
        if dist[mu] >= radius:
            continue
        for nb in exchange_neighbors(surface, mu, pool):
            if nb in dist:
                continue
            dist[nb] = dist[mu] + 1
            frontier.append(nb)
            if len(dist) > settings.vertex_cap:
                raise VertexCapExceeded(f"ball passed {settings.vertex_cap} vertices")
    ordered = tuple(sorted(dist))
    graph = MultiarcGraph(
        surface,
        k,
        ordered,
        _edges(surface, ordered),
        completeness=Completeness(
            complete=False, center=center, radius=radius, arc_bound=pool.bound
        ),
    )
    logger.info("Built %r around %s", graph, center)
    return graph


# ── Subgraphs ────────────────────────────────────────────────────────────────


def stratum(graph: MultiarcGraph, nu: Multiarc) -> MultiarcGraph:
    """Induced subgraph on the vertices containing ``nu``."""
    if len(nu) > graph.k:
        raise InvalidInput(f"{nu} has more than k={graph.k} arcs")
    if len(nu):
        graph.surface.check_multiarc(nu)
    return graph.subgraph(i for i, mu in enumerate(graph.vertices) if nu.issubset(mu))


def star(graph: MultiarcGraph, nu: Multiarc) -> MultiarcGraph:
    i = graph.index_of(nu)
    return graph.subgraph((i, *graph.neighbors(i)))


def in_b_graph(surface: Surface, mu: Multiarc) -> bool:
    return any(surface.is_nonseparating_or_ear(a) for a in mu)


def b_graph(
    surface: Surface,
    k: int,
    mode: BuildMode | str = BuildMode.COMPLETE,
    *,
    center: Multiarc | None = None,
    radius: int | None = None,
    arc_bound: int | None = None,
) -> MultiarcGraph:
    """B^[k](S): vertices holding a non-separating arc or an ear, nice-pair edges."""
    full = build(surface, k, mode, center=center, radius=radius, arc_bound=arc_bound)
    keep = [i for i, mu in enumerate(full.vertices) if in_b_graph(surface, mu)]
    vertices = tuple(full.vertices[i] for i in keep)
    groups: dict[Multiarc, list[tuple[int, Arc]]] = defaultdict(list)
    for i, mu in enumerate(vertices):
        for a in mu:
            groups[mu.without(a)].append((i, a))
    edges = sorted(
        (min(i, j), max(i, j))
        for members in groups.values()
        for (i, a), (j, b) in combinations(members, 2)
        if surface.nice_pair(a, b)
    )
    graph = MultiarcGraph(surface, k, vertices, tuple(edges), completeness=full.completeness)
    logger.info("Built B-graph %r", graph)
    return graph

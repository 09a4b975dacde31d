"""
symmetry.py – Mapping-class actions, the edge map θ, the induced automorphism
φ(A) of A^[k−1], and exact automorphism groups of finite multiarc graphs.

Automorphism groups are computed as a stabilizer chain: at each level the
orbit of a base vertex under the stabilizer of the earlier base vertices is
found by individualization and colour refinement on two copies of the graph,
and the group order is the product of the orbit sizes.
"""

from __future__ import annotations

import logging
from collections import Counter, deque
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from itertools import product
from typing import TypeAlias

from arcgraphs.config import settings
from arcgraphs.services.arcs import Arc, Multiarc
from arcgraphs.services.errors import (
    AutomorphismSearchOverflow,
    Falsification,
    IncompleteGraphError,
    InvalidInput,
)
from arcgraphs.services.multiarc_graph import MultiarcGraph, adjacent
from arcgraphs.services.paths import distance_matrix
from arcgraphs.services.polygon import Dihedral, PolygonSurface
from arcgraphs.services.surface import Surface
from arcgraphs.services.triangulated import FlipIsometry, TriangulatedSurface
from arcgraphs.services.verdict import Verdict

logger = logging.getLogger(__name__)

MappingClass: TypeAlias = Dihedral | FlipIsometry


# ── Actions ──────────────────────────────────────────────────────────────────


def act_arc(g: MappingClass, a: Arc) -> Arc:
    return g.apply(a)  # type: ignore[arg-type]


def act(g: MappingClass, mu: Multiarc) -> Multiarc:
    return Multiarc.of(act_arc(g, a) for a in mu)


def mapping_classes(surface: Surface, depth: int = 2, limit: int = 64) -> list[MappingClass]:
    """The dihedral group of a polygon, or flip-word classes found near T0."""
    if isinstance(surface, PolygonSurface):
        return list(surface.dihedral_group())
    if isinstance(surface, TriangulatedSurface):
        return list(surface.mapping_classes(depth=depth, limit=limit))
    raise InvalidInput(f"no mapping classes for {surface!r}")  # pragma: no cover


def theta(surface: Surface, mu1: Multiarc, mu2: Multiarc) -> Multiarc:
    """The shared (k−1)-multiarc of an edge."""
    if not adjacent(surface, mu1, mu2):
        raise InvalidInput(f"{mu1} and {mu2} do not span an edge")
    return mu1.intersection(mu2)


# ── Graph automorphisms ──────────────────────────────────────────────────────


@dataclass(frozen=True)
class GraphAutomorphism:
    perm: tuple[int, ...]

    @classmethod
    def identity(cls, n: int) -> GraphAutomorphism:
        return cls(tuple(range(n)))

    def __call__(self, i: int) -> int:
        return self.perm[i]

    def compose(self, other: GraphAutomorphism) -> GraphAutomorphism:
        """``self ∘ other``."""
        return GraphAutomorphism(tuple(self.perm[i] for i in other.perm))

    def inverse(self) -> GraphAutomorphism:
        inv = [0] * len(self.perm)
        for i, image in enumerate(self.perm):
            inv[image] = i
        return GraphAutomorphism(tuple(inv))

    @property
    def is_identity(self) -> bool:
        return all(i == image for i, image in enumerate(self.perm))

    def cycles(self) -> str:
        seen: set[int] = set()
        parts: list[str] = []
        for start in range(len(self.perm)):
            if start in seen or self.perm[start] == start:
                continue
            cycle = [start]
            seen.add(start)
            nxt = self.perm[start]
            while nxt != start:
                cycle.append(nxt)
                seen.add(nxt)
                nxt = self.perm[nxt]
            parts.append("(" + " ".join(str(i) for i in cycle) + ")")
        return "".join(parts) or "()"


def is_automorphism(graph: MultiarcGraph, perm: Sequence[int]) -> bool:
    if sorted(perm) != list(range(len(graph))):
        return False
    edges = set(graph.edges)
    return all((min(perm[i], perm[j]), max(perm[i], perm[j])) in edges for i, j in graph.edges)


def from_mapping_class(graph: MultiarcGraph, g: MappingClass) -> GraphAutomorphism:
    """F(g): the vertex permutation induced by a mapping class."""
    try:
        perm = tuple(graph.index[act(g, mu)] for mu in graph.vertices)
    except KeyError:
        raise InvalidInput(f"{g} does not preserve the vertex set of {graph!r}") from None
    return GraphAutomorphism(perm)


def induced_automorphism(
    upper: MultiarcGraph, lower: MultiarcGraph, A: GraphAutomorphism
) -> GraphAutomorphism:
    """φ(A): μ ↦ θ(A(e)) for any edge e of ``upper`` with θ(e) = μ."""
    if not (upper.complete and lower.complete):
        raise IncompleteGraphError("φ is only defined on complete graphs")
    if upper.k != lower.k + 1:
        raise InvalidInput("φ maps A^[k] automorphisms to A^[k−1]")
    fibers: dict[int, set[int]] = {}
    for i, j in upper.edges:
        source = lower.index_of(upper.vertices[i].intersection(upper.vertices[j]))
        image = lower.index_of(upper.vertices[A(i)].intersection(upper.vertices[A(j)]))
        fibers.setdefault(source, set()).add(image)
    if len(fibers) != len(lower):
        raise Falsification(f"θ misses {len(lower) - len(fibers)} vertices of A^[{lower.k}]")
    bad = {mu: images for mu, images in fibers.items() if len(images) != 1}
    if bad:
        raise Falsification(f"φ(A) is not well defined on {len(bad)} vertices")
    result = GraphAutomorphism(tuple(next(iter(fibers[mu])) for mu in range(len(lower))))
    if not is_automorphism(lower, result.perm):
        raise Falsification("φ(A) does not preserve edges")
    return result


# ── Automorphism search ──────────────────────────────────────────────────────


@dataclass(frozen=True)
class AutomorphismGroup:
    order: int
    generators: tuple[GraphAutomorphism, ...]
    base: tuple[int, ...]
    orbit_sizes: tuple[int, ...]


class _TwinSearch:
    """Individualization–refinement on two copies of one graph."""

    def __init__(self, graph: MultiarcGraph, initial: Sequence[int]) -> None:
        self.graph = graph
        self.n = len(graph)
        self.adjacency = graph.adjacency
        self.initial = list(initial) * 2
        self.nodes = 0

    def refine(self, colours: list[int]) -> list[int] | None:
        n = self.n
        while True:
            signatures = [
                (colours[v], tuple(sorted(colours[w + v // n * n] for w in self.adjacency[v % n])))
                for v in range(2 * n)
            ]
            names = {sig: idx for idx, sig in enumerate(sorted(set(signatures)))}
            refined = [names[sig] for sig in signatures]
            if Counter(refined[:n]) != Counter(refined[n:]):
                return None
            if len(names) == len(set(colours)):
                return refined
            colours = refined

    def individualize(self, colours: list[int], v: int, w: int) -> list[int]:
        out = list(colours)
        fresh = max(colours) + 1
        out[v] = fresh
        out[self.n + w] = fresh
        return out

    def find(self, base: Sequence[int], images: Sequence[int]) -> GraphAutomorphism | None:
        """An automorphism sending ``base[i]`` to ``images[i]``, if one exists."""
        colours: list[int] | None = list(self.initial)
        for v, w in zip(base, images):
            colours = self.refine(self.individualize(colours, v, w))  # type: ignore[arg-type]
            if colours is None:
                return None
        return self._search(colours)  # type: ignore[arg-type]

    def _search(self, colours: list[int]) -> GraphAutomorphism | None:
        self.nodes += 1
        if self.nodes > settings.automorphism_node_cap:
            raise AutomorphismSearchOverflow(
                f"automorphism search passed {settings.automorphism_node_cap} nodes"
            )
        n = self.n
        cells: dict[int, list[int]] = {}
        for v in range(n):
            cells.setdefault(colours[v], []).append(v)
        open_cells = [c for c in cells.values() if len(c) > 1]
        if not open_cells:
            position = {colours[n + w]: w for w in range(n)}
            perm = tuple(position[colours[v]] for v in range(n))
            return GraphAutomorphism(perm) if is_automorphism(self.graph, perm) else None
        cell = min(open_cells, key=lambda c: (len(c), c[0]))
        v = cell[0]
        for w in (w for w in range(n) if colours[n + w] == colours[v]):
            refined = self.refine(self.individualize(colours, v, w))
            if refined is None:
                continue
            found = self._search(refined)
            if found is not None:
                return found
        return None


def vertex_signatures(graph: MultiarcGraph) -> list[int]:
    """Initial colours: degree plus the multiset of distances to every vertex."""
    dist = distance_matrix(graph)
    raw = [
        (graph.degree(v), tuple(sorted(Counter(dist[v].tolist()).items())))
        for v in range(len(graph))
    ]
    names = {sig: idx for idx, sig in enumerate(sorted(set(raw)))}
    return [names[sig] for sig in raw]


def _orbit(start: int, generators: Iterable[GraphAutomorphism]) -> set[int]:
    gens = list(generators)
    orbit = {start}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        for g in gens:
            if g(v) not in orbit:
                orbit.add(g(v))
                queue.append(g(v))
    return orbit


def automorphisms(graph: MultiarcGraph) -> AutomorphismGroup:
    """The full automorphism group of a complete finite graph."""
    if not graph.complete:
        raise IncompleteGraphError("automorphism groups are only computed on complete graphs")
    n = len(graph)
    if n == 0:
        return AutomorphismGroup(1, (), (), ())
    search = _TwinSearch(graph, vertex_signatures(graph))
    generators: list[GraphAutomorphism] = []
    base: list[int] = []
    orbit_sizes: list[int] = []
    colours = search.refine(list(search.initial))
    assert colours is not None
    while True:
        cells: dict[int, list[int]] = {}
        for v in range(n):
            cells.setdefault(colours[v], []).append(v)
        open_cells = [c for c in cells.values() if len(c) > 1]
        if not open_cells:
            break
        cell = min(open_cells, key=lambda c: (len(c), c[0]))
        b = cell[0]
        level: list[GraphAutomorphism] = []
        orbit = {b}
        for c in cell[1:]:
            if c in orbit:
                continue
            g = search.find([*base, b], [*base, c])
            if g is not None:
                level.append(g)
                orbit = _orbit(b, level)
        generators.extend(level)
        base.append(b)
        orbit_sizes.append(len(orbit))
        refined = search.refine(search.individualize(colours, b, b))
        assert refined is not None
        colours = refined
    order = 1
    for size in orbit_sizes:
        order *= size
    logger.info(
        "Aut(%r): order %d, %d generators, %d search nodes",
        graph,
        order,
        len(generators),
        search.nodes,
    )
    return AutomorphismGroup(order, tuple(generators), tuple(base), tuple(orbit_sizes))


# ── Tower checks ─────────────────────────────────────────────────────────────


def theta_image(upper: MultiarcGraph, lower: MultiarcGraph) -> set[int]:
    return {
        lower.index_of(upper.vertices[i].intersection(upper.vertices[j])) for i, j in upper.edges
    }


def tower_check(
    upper: MultiarcGraph, lower: MultiarcGraph, classes: Sequence[MappingClass]
) -> Verdict:
    """θ surjectivity, G = φ∘F, the homomorphism law and a trivial kernel."""
    problems: list[str] = []
    image = theta_image(upper, lower)
    if len(image) != len(lower):
        problems.append(f"θ hits {len(image)} of {len(lower)} vertices")

    lifted: list[tuple[MappingClass, GraphAutomorphism, GraphAutomorphism]] = []
    for g in classes:
        F = from_mapping_class(upper, g)
        G = from_mapping_class(lower, g)
        try:
            phi = induced_automorphism(upper, lower, F)
        except Falsification as exc:
            problems.append(f"{g}: {exc}")
            continue
        if phi != G:
            problems.append(f"{g}: φ(F(g)) differs from G(g)")
        if phi.is_identity and not F.is_identity:
            problems.append(f"{g}: non-trivial automorphism in the kernel of φ")
        lifted.append((g, F, phi))

    for (g, F, phi), (h, F2, phi2) in product(lifted, repeat=2):
        composed = induced_automorphism(upper, lower, F.compose(F2))
        if composed != phi.compose(phi2):
            problems.append(f"φ(F({g})∘F({h})) ≠ φ(F({g}))∘φ(F({h}))")

    if problems:
        logger.error("Tower check failed: %s", problems[0])
    return Verdict(
        check="tower",
        instance=f"{upper.surface.spec.describe()} k={upper.k}",
        holds=not problems,
        witnesses=problems[:10],
        details={
            "theta_image": len(image),
            "lower_vertices": len(lower),
            "classes": len(lifted),
        },
    )


def faithfulness(graph: MultiarcGraph, classes: Sequence[MappingClass]) -> Verdict:
    """Distinct mapping classes induce distinct graph automorphisms."""
    perms: dict[tuple[int, ...], MappingClass] = {}
    clashes: list[str] = []
    for g in classes:
        F = from_mapping_class(graph, g)
        if not is_automorphism(graph, F.perm):
            clashes.append(f"{g} does not act by an automorphism")
        if F.perm in perms:
            clashes.append(f"{g} and {perms[F.perm]} act identically")
        perms.setdefault(F.perm, g)
    return Verdict(
        check="faithfulness",
        instance=f"{graph.surface.spec.describe()} k={graph.k}",
        holds=not clashes,
        witnesses=clashes[:10],
        details={"classes": len(classes), "distinct": len(perms)},
    )


def group_elements(
    generators: Sequence[GraphAutomorphism], n: int, limit: int = 100_000
) -> list[GraphAutomorphism]:
    """Closure of ``generators`` under composition."""
    identity = GraphAutomorphism.identity(n)
    seen = {identity.perm: identity}
    queue = deque([identity])
    while queue:
        g = queue.popleft()
        for s in generators:
            h = s.compose(g)
            if h.perm not in seen:
                seen[h.perm] = h
                queue.append(h)
                if len(seen) > limit:
                    raise AutomorphismSearchOverflow(f"group has more than {limit} elements")
    return [seen[p] for p in sorted(seen)]

"""
combing.py – Combing arcs along an oriented arc x⁺, collapse detection, the
injective assignment of a multiarc into its combed image, and geodesic
surgery pushing a path into the stratum of x.

Combing is exact on polygons. A chord b crossing x = (p, h) with head h is
split at the crossing and each half is slid along x to h, giving the chords
(u, h) and (v, h); boundary-parallel pieces are dropped.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import cast

import networkx as nx
import numpy as np

from arcgraphs.config import settings
from arcgraphs.services.arcs import Arc, Chord, Multiarc, OrientedArc
from arcgraphs.services.errors import (
    Falsification,
    IncompleteGraphError,
    InvalidInput,
)
from arcgraphs.services.multiarc_graph import MultiarcGraph, all_multiarcs
from arcgraphs.services.paths import Path, is_valid, shortest_path, validate
from arcgraphs.services.polygon import PolygonSurface
from arcgraphs.services.surface import Backend, Surface
from arcgraphs.services.verdict import Verdict

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CombResult:
    source: Arc
    images: tuple[Arc, ...]
    collapsed: bool


@dataclass(frozen=True)
class Assignment:
    """Injective map from the arcs of a multiarc into its combed image ∪ {x}."""

    x: Arc
    pairs: tuple[tuple[Arc, Arc], ...]

    def __getitem__(self, a: Arc) -> Arc:
        for source, target in self.pairs:
            if source == a:
                return target
        raise KeyError(a)

    def as_dict(self) -> dict[Arc, Arc]:
        return dict(self.pairs)

    @property
    def image(self) -> Multiarc:
        return Multiarc.of(target for _, target in self.pairs)

    @property
    def is_injective(self) -> bool:
        targets = [t for _, t in self.pairs]
        return len(set(targets)) == len(targets)


def _polygon(surface: Surface) -> PolygonSurface:
    if not isinstance(surface, PolygonSurface):
        raise InvalidInput("combing is only available on polygons")
    return surface


# ── Combing ──────────────────────────────────────────────────────────────────


def comb(
    surface: Surface, b: Arc, x_plus: OrientedArc, context: Multiarc | None = None
) -> CombResult:
    polygon = _polygon(surface)
    x = x_plus.arc
    if b == x:
        raise InvalidInput("cannot comb an arc along itself")
    polygon.check_arc(b)
    polygon.check_arc(x)
    if polygon.disjoint(b, x):
        images: tuple[Arc, ...] = (b,)
    else:
        head = x_plus.head
        pieces = {
            Chord(end, head)
            for end in cast(Chord, b).ends
            if not polygon.is_peripheral(end, head)
        }
        images = tuple(sorted(pieces))
    members = set(context or ())
    return CombResult(source=b, images=images, collapsed=set(images) <= members)


def comb_multiarc(surface: Surface, alpha: Multiarc, x_plus: OrientedArc) -> Multiarc:
    """π_{x⁺}(α): the union of the combed images of every arc of α."""
    surface.check_multiarc(alpha)
    images: set[Arc] = set()
    for a in alpha:
        if a == x_plus.arc:
            images.add(a)
            continue
        images.update(comb(surface, a, x_plus).images)
    return Multiarc.of(images)


def detect_collapse(surface: Surface, alpha: Multiarc, x_plus: OrientedArc) -> Arc | None:
    """The unique arc of α crossing x whose combed image lies in α, if any."""
    surface.check_multiarc(alpha)
    x = x_plus.arc
    collapsing = [
        a
        for a in alpha
        if a != x
        and not surface.disjoint(a, x)
        and comb(surface, a, x_plus, alpha).collapsed
    ]
    if len(collapsing) > 1:
        logger.error("Several arcs of %s collapse along %s: %s", alpha, x_plus, collapsing)
        raise Falsification(f"{len(collapsing)} arcs of {alpha} collapse along {x_plus}")
    return collapsing[0] if collapsing else None


# ── Assignment ──────────────────────────────────────────────────────────────


def complete_to_triangulation(surface: Surface, alpha: Multiarc) -> Multiarc:
    """Greedy lexicographic completion of ``alpha`` to a maximal multiarc."""
    arcs = list(alpha)
    for a in surface.enumerate_arcs():
        if len(arcs) == surface.omega:
            break
        if a not in arcs and all(surface.disjoint(a, c) for c in arcs):
            arcs.append(a)
    return Multiarc.of(arcs)


def _match(options: dict[Arc, list[Arc]]) -> dict[Arc, Arc] | None:
    """Perfect matching of sources into their options, or ``None``."""
    graph = nx.Graph()
    left = [("src", a) for a in sorted(options)]
    graph.add_nodes_from(left, bipartite=0)
    for a in sorted(options):
        for target in options[a]:
            graph.add_edge(("src", a), ("dst", target))
    matching = nx.bipartite.hopcroft_karp_matching(graph, top_nodes=left)
    out = {a: matching[("src", a)][1] for a in options if ("src", a) in matching}
    return out if len(out) == len(options) else None


def assignment(surface: Surface, alpha: Multiarc, x_plus: OrientedArc) -> Assignment:
    """Send each arc of α injectively into its own combed image, or into x if it collapses.

    α is first completed to a triangulation; there exactly one arc collapses
    and is sent to x, the remaining arcs are matched into their images, and
    the result is restricted back to α.
    """
    x = x_plus.arc
    triangulation = complete_to_triangulation(surface, alpha)
    collapse = detect_collapse(surface, triangulation, x_plus)
    options: dict[Arc, list[Arc]] = {}
    for a in triangulation:
        if a == x:
            options[a] = [x]
        elif a == collapse:
            options[a] = [x]
        else:
            options[a] = list(comb(surface, a, x_plus).images)
    matched = _match(options)
    if matched is None:
        raise Falsification(f"no injective assignment of {triangulation} along {x_plus}")
    return Assignment(x=x, pairs=tuple((a, matched[a]) for a in alpha))


def comb_sweep(surface: Surface, k: int) -> Verdict:
    """Collapse uniqueness and the assignment law over every k-multiarc and every x⁺."""
    polygon = _polygon(surface)
    if not 1 <= k <= polygon.omega:
        raise InvalidInput(f"k={k} outside 1..{polygon.omega}")
    arcs = list(polygon.arcs)
    checked = 0
    violations: list[dict[str, str]] = []
    for alpha in all_multiarcs(polygon, k, arcs):
        for x in arcs:
            for head in x.ends:  # type: ignore[union-attr]
                x_plus = OrientedArc(x, head)
                checked += 1
                try:
                    detect_collapse(polygon, alpha, x_plus)
                    chosen = assignment(polygon, alpha, x_plus)
                except Falsification as exc:
                    violations.append({"alpha": str(alpha), "x": str(x_plus), "error": str(exc)})
                    continue
                stray = [
                    a
                    for a, b in chosen.pairs
                    if b != x and a != x and b not in comb(polygon, a, x_plus).images
                ]
                if not chosen.is_injective or stray:
                    violations.append(
                        {"alpha": str(alpha), "x": str(x_plus), "error": "assignment law failed"}
                    )
    if violations:
        logger.error("Combing failed on %d case(s)", len(violations))
    return Verdict(
        check="combing",
        instance=f"{polygon.spec.describe()} k={k}",
        holds=not violations,
        witnesses=violations[:10],
        details={"cases": checked},
    )


# ── Surgery ─────────────────────────────────────────────────────────────────


@dataclass(frozen=True)
class SurgeryResult:
    path: Path
    strategies: tuple[str, ...] = field(default_factory=tuple)

    @property
    def length(self) -> int:
        return self.path.length


def _x_free_segment(vertices: list[Multiarc], x: Arc) -> tuple[int, int] | None:
    for j, mu in enumerate(vertices):
        if x not in mu:
            m = j
            while x not in vertices[m + 1]:
                m += 1
            return j, m
    return None


def has_x_disjoint_segment(surface: Surface, path: Path, x: Arc) -> bool:
    """True when some maximal run of vertices without x has every arc disjoint from x."""
    runs: list[list[Multiarc]] = [[]]
    for mu in path:
        if x in mu:
            runs.append([])
        else:
            runs[-1].append(mu)
    return any(run and all(surface.disjoint(a, x) for v in run for a in v) for run in runs)


def _shortcut(
    surface: Surface, vertices: list[Multiarc], x: Arc, j: int, m: int
) -> list[Multiarc] | None:
    """Swap the arc that is later exchanged for x back to x, one stretch earlier."""
    (b,) = vertices[m].minus(vertices[m + 1]).arcs
    i = j - 1
    for t in range(m - 1, j - 2, -1):
        if b not in vertices[t]:
            i = t
            break
    replaced = [mu.without(b).with_arc(x) if i < t <= m else mu for t, mu in enumerate(vertices)]
    candidate = Path(tuple(replaced)).simplified()
    if candidate.length < len(vertices) - 1 and is_valid(surface, candidate):
        return list(candidate.vertices)
    return None


def _augment(
    assigned: dict[Arc, Arc], arc: Arc, options: dict[Arc, list[Arc]], seen: set[Arc]
) -> bool:
    for target in options[arc]:
        if target in seen:
            continue
        seen.add(target)
        holder = next((a for a, t in assigned.items() if t == target), None)
        if holder is None or _augment(assigned, holder, options, seen):
            assigned[arc] = target
            return True
    return False


def _combed_segment(
    surface: Surface, vertices: list[Multiarc], x_plus: OrientedArc, j: int, m: int
) -> list[Multiarc] | None:
    """Replace γ_j..γ_m by combed assignments, sweeping backwards from γ_m."""
    x = x_plus.arc
    current = assignment(surface, vertices[m], x_plus).as_dict()
    images = {m: Multiarc.of(current.values())}
    for t in range(m - 1, j - 1, -1):
        (y,) = vertices[t].minus(vertices[t + 1]).arcs
        kept = {a: current[a] for a in vertices[t] if a != y and a in current}
        options = {
            a: list(comb(surface, a, x_plus).images) if a != x else [x] for a in vertices[t]
        }
        if not options[y]:
            options[y] = [x]
        if not _augment(kept, y, options, set()):
            return None
        current = kept
        images[t] = Multiarc.of(current.values())
    replaced = [images.get(t, mu) for t, mu in enumerate(vertices)]
    candidate = Path(tuple(replaced)).simplified()
    if candidate.length <= len(vertices) - 1 and is_valid(surface, candidate):
        return list(candidate.vertices)
    return None


def _stratum_detour(
    graph: MultiarcGraph, vertices: list[Multiarc], x: Arc, j: int, m: int
) -> list[Multiarc]:
    allowed = [x in mu for mu in graph.vertices]
    start, stop = graph.index_of(vertices[j - 1]), graph.index_of(vertices[m + 1])
    detour = shortest_path(graph, start, stop, allowed)
    budget = m - j + 2
    if detour is None or len(detour) - 1 > budget:
        if not graph.complete:
            raise IncompleteGraphError("the stratum detour leaves the explored ball")
        raise Falsification(
            f"stratum of {x} needs {'∞' if detour is None else len(detour) - 1} steps "
            f"where the path used {budget}"
        )
    return vertices[: j - 1] + [graph.vertices[i] for i in detour] + vertices[m + 2 :]


def surgery(graph: MultiarcGraph, path: Path, x_plus: OrientedArc | Arc) -> SurgeryResult:
    """Rewrite ``path`` so every vertex contains x, never making it longer."""
    surface = graph.surface
    if not isinstance(x_plus, OrientedArc):
        head = surface.endpoints(x_plus)[1]
        x_plus = OrientedArc(x_plus, head)
    x = x_plus.arc
    validate(surface, path)
    if x not in path.start or x not in path.end:
        raise InvalidInput(f"both ends of the path must contain {x}")

    vertices = list(path.simplified().vertices)
    strategies: list[str] = []
    while (segment := _x_free_segment(vertices, x)) is not None:
        j, m = segment
        crossing = any(not surface.disjoint(a, x) for t in range(j, m + 1) for a in vertices[t])
        replaced: list[Multiarc] | None = None
        name = "stratum-detour"
        if not crossing:
            replaced = _shortcut(surface, vertices, x, j, m)
            name = "shortcut"
        elif surface.backend is Backend.POLYGON:
            replaced = _combed_segment(surface, vertices, x_plus, j, m)
            name = "combed"
        if replaced is None or replaced == vertices:
            replaced = _stratum_detour(graph, vertices, x, j, m)
            name = "stratum-detour"
        logger.debug("Surgery step %s on segment %d..%d", name, j, m)
        strategies.append(name)
        vertices = list(Path(tuple(replaced)).simplified().vertices)

    result = Path(tuple(vertices))
    validate(surface, result)
    if result.length > path.length:
        raise Falsification("surgery lengthened the path")
    return SurgeryResult(path=result, strategies=tuple(strategies))


# ── Sweeps ──────────────────────────────────────────────────────────────────


def random_paths_through(
    graph: MultiarcGraph, count: int, seed: int = 0
) -> list[tuple[Path, Arc]]:
    """Seeded valid paths whose two ends share an arc x, detouring via a random vertex."""
    if not graph.complete:
        raise IncompleteGraphError("random path sampling needs a complete graph")
    rng = np.random.default_rng(seed)
    n = len(graph)
    out: list[tuple[Path, Arc]] = []
    attempts = 0
    while len(out) < count and attempts < 20 * count:
        attempts += 1
        u = int(rng.integers(n))
        x = graph.vertices[u].arcs[int(rng.integers(graph.k))]
        holders = [i for i, mu in enumerate(graph.vertices) if x in mu]
        v = holders[int(rng.integers(len(holders)))]
        w = int(rng.integers(n))
        first = shortest_path(graph, u, w)
        second = shortest_path(graph, w, v)
        if first is None or second is None:
            continue
        trail = first + second[1:]
        out.append((Path(tuple(graph.vertices[i] for i in trail)), x))
    return out


def surgery_sweep(graph: MultiarcGraph, count: int | None = None, seed: int = 0) -> Verdict:
    """Surgery on seeded random paths, checking every output invariant.

    A path that leaves the stratum of x through a stretch whose arcs all miss x
    must come out strictly shorter.
    """
    count = settings.random_paths if count is None else count
    violations: list[dict[str, str]] = []
    strategies: dict[str, int] = {}
    shortened = strict = 0
    for path, x in random_paths_through(graph, count, seed):
        try:
            result = surgery(graph, path, x)
        except Falsification as exc:
            violations.append({"path": str(path), "x": str(x), "error": str(exc)})
            continue
        out = result.path
        if not (
            out.start == path.start
            and out.end == path.end
            and all(x in mu for mu in out)
            and out.length <= path.length
        ):
            violations.append({"path": str(path), "x": str(x), "error": "invariant failed"})
        if has_x_disjoint_segment(graph.surface, path, x):
            strict += 1
            if out.length >= path.length:
                violations.append(
                    {"path": str(path), "x": str(x), "error": "x-disjoint detour not shortened"}
                )
        if out.length < path.length and any(x not in mu for mu in path):
            shortened += 1
        for name in result.strategies:
            strategies[name] = strategies.get(name, 0) + 1
    if violations:
        logger.error("Surgery failed on %d path(s)", len(violations))
    return Verdict(
        check="surgery",
        instance=f"{graph.surface.spec.describe()} k={graph.k}",
        holds=not violations,
        witnesses=violations[:10],
        details={
            "paths": count,
            "seed": seed,
            "shortened": shortened,
            "x_disjoint": strict,
            "strategies": strategies,
        },
    )

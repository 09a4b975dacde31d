"""
paths.py – Paths in multiarc graphs: constructive connection, BFS distances,
exhaustive geodesic enumeration, unicorn paths and the convexity sweep.
"""

from __future__ import annotations

import logging
from collections import deque
from collections.abc import Callable, Iterator, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from arcgraphs.config import settings
from arcgraphs.services.arcs import Arc, Chord, Multiarc, OrientedArc
from arcgraphs.services.errors import (
    GeodesicOverflow,
    IncompleteGraphError,
    InvalidInput,
    SearchBoundExhausted,
)
from arcgraphs.services.multiarc_graph import MultiarcGraph, adjacent, exchange_neighbors
from arcgraphs.services.surface import Backend, Surface
from arcgraphs.services.verdict import Verdict

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Path:
    vertices: tuple[Multiarc, ...]

    def __post_init__(self) -> None:
        if not self.vertices:
            raise InvalidInput("a path needs at least one vertex")

    def __iter__(self) -> Iterator[Multiarc]:
        return iter(self.vertices)

    def __getitem__(self, i: int) -> Multiarc:
        return self.vertices[i]

    def __str__(self) -> str:
        return " → ".join(str(v) for v in self.vertices)

    @property
    def length(self) -> int:
        return len(self.vertices) - 1

    @property
    def start(self) -> Multiarc:
        return self.vertices[0]

    @property
    def end(self) -> Multiarc:
        return self.vertices[-1]

    def simplified(self) -> Path:
        """Drop consecutive repeats."""
        out = [self.vertices[0]]
        for v in self.vertices[1:]:
            if v != out[-1]:
                out.append(v)
        return Path(tuple(out))


def validate(surface: Surface, path: Path) -> None:
    """Raise ``InvalidInput`` unless every step of ``path`` is an edge."""
    for mu in path:
        surface.check_multiarc(mu)
    for u, v in zip(path.vertices, path.vertices[1:]):
        if not adjacent(surface, u, v):
            raise InvalidInput(f"{u} and {v} are not adjacent")


def is_valid(surface: Surface, path: Path) -> bool:
    try:
        validate(surface, path)
    except InvalidInput:
        return False
    return True


# ── Breadth-first search ─────────────────────────────────────────────────────


def bfs_distances(
    graph: MultiarcGraph, source: int, allowed: Sequence[bool] | None = None
) -> list[int]:
    """Distances from ``source`` (−1 when unreachable), optionally inside ``allowed``."""
    dist = [-1] * len(graph)
    dist[source] = 0
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for w in graph.neighbors(u):
            if dist[w] < 0 and (allowed is None or allowed[w]):
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def shortest_path(
    graph: MultiarcGraph, source: int, target: int, allowed: Sequence[bool] | None = None
) -> list[int] | None:
    """Lexicographically least shortest index path, or ``None``."""
    dist = bfs_distances(graph, target, allowed)
    if dist[source] < 0:
        return None
    out = [source]
    while out[-1] != target:
        here = out[-1]
        out.append(min(w for w in graph.neighbors(here) if dist[w] == dist[here] - 1))
    return out


def distance(graph: MultiarcGraph, u: Multiarc, v: Multiarc) -> int | None:
    """Graph distance, or ``None`` when ``v`` is not reachable inside ``graph``."""
    d = bfs_distances(graph, graph.index_of(u))[graph.index_of(v)]
    if d < 0:
        if not graph.complete:
            logger.warning("Distance %s → %s unknown inside the ball", u, v)
        return None
    return d


def distance_matrix(graph: MultiarcGraph) -> np.ndarray:
    """All-pairs BFS distances (−1 for unreachable pairs)."""
    n = len(graph)
    out = np.full((n, n), -1, dtype=np.int32)
    for i in range(n):
        out[i] = bfs_distances(graph, i)
    return out


def all_geodesics(
    graph: MultiarcGraph, u: Multiarc, v: Multiarc, cap: int | None = None
) -> list[Path]:
    """Every geodesic from ``u`` to ``v`` through the BFS layer DAG."""
    if not graph.complete:
        raise IncompleteGraphError("geodesics are only certified on complete graphs")
    cap = settings.geodesic_cap if cap is None else cap
    iu, iv = graph.index_of(u), graph.index_of(v)
    du = bfs_distances(graph, iu)
    dv = bfs_distances(graph, iv)
    total = du[iv]
    if total < 0:
        return []
    on = [du[w] >= 0 and dv[w] >= 0 and du[w] + dv[w] == total for w in range(len(graph))]

    layers: list[list[int]] = [[] for _ in range(total + 1)]
    for w in range(len(graph)):
        if on[w]:
            layers[du[w]].append(w)
    count = {iu: 1}
    for depth in range(1, total + 1):
        for w in layers[depth]:
            count[w] = sum(
                count.get(p, 0) for p in graph.neighbors(w) if on[p] and du[p] == depth - 1
            )
    if count.get(iv, 0) > cap:
        raise GeodesicOverflow(f"{count[iv]} geodesics exceed the cap of {cap}")

    def forward(w: int) -> list[int]:
        return [x for x in graph.neighbors(w) if on[x] and du[x] == du[w] + 1]

    out: list[Path] = []
    stack: list[tuple[int, list[int]]] = [(iu, [iu])]
    while stack:
        w, trail = stack.pop()
        if w == iv:
            out.append(Path(tuple(graph.vertices[i] for i in trail)))
            continue
        for x in reversed(forward(w)):
            stack.append((x, [*trail, x]))
    return out


# ── Constructive connection ─────────────────────────────────────────────────


def _exchange_key(mu: Multiarc) -> Callable[[Multiarc], tuple[Arc, Arc]]:
    """Order exchanges by the arc they add, then by the arc they drop."""
    return lambda nb: (nb.minus(mu).arcs[0], mu.minus(nb).arcs[0])


def _search(
    surface: Surface,
    start: Multiarc,
    goal: Callable[[Multiarc], bool],
    within: Multiarc,
    pool: Sequence[Arc],
) -> list[Multiarc]:
    """Shortest exchange path from ``start`` to a vertex satisfying ``goal``, keeping ``within``."""
    if goal(start):
        return [start]
    parent: dict[Multiarc, Multiarc | None] = {start: None}
    queue = deque([start])
    while queue:
        mu = queue.popleft()
        step = set(exchange_neighbors(surface, mu, pool, within))
        for nb in sorted(step, key=_exchange_key(mu)):
            if nb in parent:
                continue
            parent[nb] = mu
            if goal(nb):
                out = [nb]
                while parent[out[-1]] is not None:
                    out.append(parent[out[-1]])  # type: ignore[arg-type]
                return out[::-1]
            queue.append(nb)
            if len(parent) > settings.search_cap:
                raise SearchBoundExhausted(
                    f"connection search passed {settings.search_cap} states"
                )
    raise SearchBoundExhausted(f"no path from {start} inside the stratum of {within}")


def connect(
    surface: Surface, alpha: Multiarc, beta: Multiarc, arc_bound: int | None = None
) -> Path:
    """A path from ``alpha`` to ``beta`` built by induction on the number of arcs.

    The (k−1)-multiarcs obtained by dropping the last arc are connected first;
    each of their steps is then lifted inside the stratum of the shared arcs,
    and a final search inside the stratum of β's dropped-arc part reaches β.
    """
    if len(alpha) != len(beta):
        raise InvalidInput("connect needs multiarcs of equal size")
    surface.check_multiarc(alpha)
    surface.check_multiarc(beta)
    pool = tuple(surface.enumerate_arcs(arc_bound))
    path = Path(tuple(_connect(surface, alpha, beta, pool))).simplified()
    validate(surface, path)
    logger.debug("Connected %s to %s in %d steps", alpha, beta, path.length)
    return path


def _connect(
    surface: Surface, alpha: Multiarc, beta: Multiarc, pool: Sequence[Arc]
) -> list[Multiarc]:
    empty = Multiarc(())
    if alpha == beta:
        return [alpha]
    if len(alpha) == 1:
        return _search(surface, alpha, lambda mu: mu == beta, empty, pool)

    lower = _connect(surface, alpha.without(alpha.arcs[-1]), beta.without(beta.arcs[-1]), pool)
    out = [alpha]
    for prev, nxt in zip(lower, lower[1:]):
        shared = prev.intersection(nxt)
        step = _search(surface, out[-1], nxt.issubset, shared, pool)
        out.extend(step[1:])
    tail = _search(surface, out[-1], lambda mu: mu == beta, lower[-1], pool)
    out.extend(tail[1:])
    return out


# ── Unicorn paths ────────────────────────────────────────────────────────────


def unicorn_path(surface: Surface, a: OrientedArc, b: OrientedArc) -> list[Arc]:
    """Arc-graph path from ``a`` to ``b`` through one unicorn arc."""
    if surface.backend is not Backend.POLYGON:
        raise InvalidInput("unicorn paths are only available on polygons")
    if a.arc == b.arc:
        raise InvalidInput("a unicorn path needs two distinct arcs")
    if surface.disjoint(a.arc, b.arc):
        return [a.arc, b.arc]

    def unicorn(x: OrientedArc, y: OrientedArc) -> Chord | None:
        (tail,) = [e for e in x.arc.ends if e != x.head]  # type: ignore[union-attr]
        if surface.is_peripheral(tail, y.head):  # type: ignore[attr-defined]
            return None
        return Chord(tail, y.head)

    c = unicorn(a, b)
    if c is None:
        choices = sorted(
            (chord.ends, chord)
            for ha in a.arc.ends  # type: ignore[union-attr]
            for hb in b.arc.ends  # type: ignore[union-attr]
            if (chord := unicorn(OrientedArc(a.arc, ha), OrientedArc(b.arc, hb))) is not None
        )
        if not choices:
            raise InvalidInput(f"no orientation of {a.arc}, {b.arc} gives a unicorn arc")
        c = choices[0][1]
    return [a.arc, c, b.arc]


# ── Convexity ────────────────────────────────────────────────────────────────


def _scan_pairs(
    dist: np.ndarray, masks: dict[Arc, np.ndarray], pairs: list[tuple[int, int, tuple[Arc, ...]]]
) -> list[tuple[int, int, int]]:
    """Pairs whose geodesic interval leaves the stratum of their shared arcs."""
    bad: list[tuple[int, int, int]] = []
    for u, v, shared in pairs:
        interval = dist[u] + dist[v] == dist[u, v]
        interval &= (dist[u] >= 0) & (dist[v] >= 0)
        inside = np.logical_and.reduce([masks[a] for a in shared])
        outside = np.flatnonzero(interval & ~inside)
        if outside.size:
            bad.append((u, v, int(outside[0])))
    return bad


def convexity_sweep(
    graph: MultiarcGraph,
    sample: int | None = None,
    seed: int = 0,
    workers: int | None = None,
) -> Verdict:
    """Check that geodesics between vertices sharing arcs never leave their stratum.

    A vertex lies on some geodesic from u to v exactly when d(u,w) + d(w,v) =
    d(u,v), so the distance matrix decides every pair at once.
    """
    if not graph.complete:
        raise IncompleteGraphError("convexity is only certified on complete graphs")
    workers = settings.workers if workers is None else workers
    dist = distance_matrix(graph)
    arcs = sorted({a for mu in graph.vertices for a in mu})
    masks = {a: np.array([a in mu for mu in graph.vertices]) for a in arcs}

    pairs = [
        (u, v, shared.arcs)
        for u in range(len(graph))
        for v in range(u + 1, len(graph))
        if len(shared := graph.vertices[u].intersection(graph.vertices[v]))
    ]
    total = len(pairs)
    if sample is not None and sample < total:
        rng = np.random.default_rng(seed)
        picked = sorted(rng.choice(total, size=sample, replace=False).tolist())
        pairs = [pairs[i] for i in picked]

    if workers > 1 and len(pairs) > workers:
        chunks = [pairs[i::workers] for i in range(workers)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = pool.map(_scan_pairs, [dist] * workers, [masks] * workers, chunks)
            bad = sorted(b for part in parts for b in part)
    else:
        bad = _scan_pairs(dist, masks, pairs)

    witnesses = [
        {"u": graph.label(u), "v": graph.label(v), "off_stratum": graph.label(w)}
        for u, v, w in bad[:10]
    ]
    if bad:
        logger.error("Convexity violated on %d pair(s)", len(bad))
    return Verdict(
        check="convexity",
        instance=f"{graph.surface.spec.describe()} k={graph.k}",
        holds=not bad,
        witnesses=witnesses,
        details={"pairs_checked": len(pairs), "pairs_total": total, "violations": len(bad)},
    )

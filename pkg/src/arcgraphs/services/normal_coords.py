"""
normal_coords.py – Combinatorial triangulations and normal coordinates of arcs.

Conventions
-----------
* Edges are integers ``0..E-1``; half-edge ``e`` and its twin ``~e == -e-1``.
* A triangle is a counter-clockwise triple of half-edges ``(h0, h1, h2)`` where
  ``h_i`` runs from corner ``i`` to corner ``i+1``.
* A boundary segment is an edge with a single half-edge present.
* Interior edges of a reference triangulation are numbered before boundary
  edges, so an arc vector over interior edges is a prefix of the full vector.

Weights
-------
A weight vector lists, per edge, how often an arc crosses it. Inside a
triangle with side weights ``x0, x1, x2`` the arc splits into corner strands
and (at most at one corner) terminal strands ending at that corner; see
``decompose``. ``flip_weights`` recomputes the weight of a flipped edge by
gluing these strands across the flipped edge explicitly.
"""

from __future__ import annotations

import logging
from collections import deque
from collections.abc import Iterator, Sequence
from dataclasses import dataclass, field
from functools import cached_property

from networkx.utils import UnionFind

from arcgraphs.services.errors import InvalidInput, SearchBoundExhausted
from arcgraphs.services.surface import SurfaceSpec

logger = logging.getLogger(__name__)


def edge_of(h: int) -> int:
    return h if h >= 0 else ~h


def _slot(h: int) -> int:
    return 2 * h if h >= 0 else 2 * (~h) + 1


# ── Per-triangle decomposition ───────────────────────────────────────────────


@dataclass(frozen=True)
class Decomposition:
    """Strand counts of one triangle.

    ``corners[i]`` strands cut off corner ``i`` (joining side ``i-1`` to side
    ``i``). ``terminals`` strands run from corner ``terminal_side + 2`` to side
    ``terminal_side`` and end there.
    """

    corners: tuple[int, int, int]
    terminal_side: int | None = None
    terminals: int = 0


def decompose(x0: int, x1: int, x2: int) -> Decomposition:
    xs = (x0, x1, x2)
    if min(xs) < 0:
        raise InvalidInput(f"negative side weight in {xs}")
    for i in range(3):
        nxt, prv = xs[(i + 1) % 3], xs[(i + 2) % 3]
        if xs[i] > nxt + prv:
            corners = [0, 0, 0]
            corners[i] = prv
            corners[(i + 1) % 3] = nxt
            return Decomposition((corners[0], corners[1], corners[2]), i, xs[i] - nxt - prv)
    if sum(xs) % 2:
        raise InvalidInput(f"side weights {xs} violate the parity condition")
    return Decomposition(
        tuple(  # type: ignore[arg-type]
            (xs[(i + 2) % 3] + xs[i] - xs[(i + 1) % 3]) // 2 for i in range(3)
        )
    )


# ── Combinatorial triangulation ─────────────────────────────────────────────


@dataclass(frozen=True)
class CombinatorialTriangulation:
    triangles: tuple[tuple[int, int, int], ...]
    num_edges: int
    boundary: frozenset[int] = frozenset()
    # marked-point label of each half-edge's tail, indexed by _slot(h); -1 if absent
    tails: tuple[int, ...] = ()
    _where: dict[int, tuple[int, int]] = field(
        default_factory=dict, init=False, repr=False, compare=False, hash=False
    )

    def __post_init__(self) -> None:
        where: dict[int, tuple[int, int]] = {}
        for t, tri in enumerate(self.triangles):
            for s, h in enumerate(tri):
                if h in where:
                    raise InvalidInput(f"half-edge {h} used twice")
                where[h] = (t, s)
        for e in range(self.num_edges):
            present = (e in where) + (~e in where)
            if present != (1 if e in self.boundary else 2):
                raise InvalidInput(f"edge {e} is glued inconsistently")
        object.__setattr__(self, "_where", where)
        if not self.tails:
            object.__setattr__(self, "tails", self._compute_tails())

    # ── lookup ─────────────────────────────────────────────────────────────

    def where(self, h: int) -> tuple[int, int]:
        return self._where[h]

    def has(self, h: int) -> bool:
        return h in self._where

    def next_half(self, h: int) -> int:
        t, s = self._where[h]
        return self.triangles[t][(s + 1) % 3]

    def rotated(self, h: int) -> tuple[int, int, int]:
        """The triangle containing ``h``, starting at ``h``."""
        t, s = self._where[h]
        tri = self.triangles[t]
        return (tri[s], tri[(s + 1) % 3], tri[(s + 2) % 3])

    def tail(self, h: int) -> int:
        return self.tails[_slot(h)]

    def head(self, h: int) -> int:
        return self.tail(self.next_half(h))

    @cached_property
    def interior_edges(self) -> tuple[int, ...]:
        return tuple(e for e in range(self.num_edges) if e not in self.boundary)

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(sorted({v for v in self.tails if v >= 0}))

    @cached_property
    def boundary_vertices(self) -> frozenset[int]:
        out = set()
        for e in self.boundary:
            h = e if self.has(e) else ~e
            out.add(self.tail(h))
        return frozenset(out)

    def is_flippable(self, e: int) -> bool:
        if e in self.boundary or not (0 <= e < self.num_edges):
            return False
        return self._where[e][0] != self._where[~e][0]

    def _compute_tails(self) -> tuple[int, ...]:
        corners = [(t, s) for t in range(len(self.triangles)) for s in range(3)]
        uf = UnionFind(corners)
        for e in self.interior_edges:
            t1, s1 = self._where[e]
            t2, s2 = self._where[~e]
            uf.union((t1, s1), (t2, (s2 + 1) % 3))
            uf.union((t1, (s1 + 1) % 3), (t2, s2))
        labels: dict[tuple[int, int], int] = {}
        tails = [-1] * (2 * self.num_edges)
        for t, s in corners:
            root = uf[(t, s)]
            if root not in labels:
                labels[root] = len(labels)
            tails[_slot(self.triangles[t][s])] = labels[root]
        return tuple(tails)

    # ── flips ──────────────────────────────────────────────────────────────

    def square(self, e: int) -> tuple[int, int, int, int]:
        """``(h1, h2, k1, k2)`` with triangles ``(e, h1, h2)`` and ``(~e, k1, k2)``."""
        _, h1, h2 = self.rotated(e)
        _, k1, k2 = self.rotated(~e)
        return h1, h2, k1, k2

    def flip(self, e: int) -> CombinatorialTriangulation:
        if not self.is_flippable(e):
            raise InvalidInput(f"edge {e} is not flippable")
        t1, _ = self._where[e]
        t2, _ = self._where[~e]
        h1, h2, k1, k2 = self.square(e)
        triangles = list(self.triangles)
        triangles[t1] = (h2, k1, e)
        triangles[t2] = (k2, h1, ~e)
        tails = list(self.tails)
        tails[_slot(e)] = self.tail(k2)
        tails[_slot(~e)] = self.tail(h2)
        return CombinatorialTriangulation(
            tuple(triangles), self.num_edges, self.boundary, tuple(tails)
        )


# ── Weight transport ────────────────────────────────────────────────────────


def unit_edge(num_edges: int, e: int) -> tuple[int, ...]:
    w = [0] * num_edges
    w[e] = -1
    return tuple(w)


def flip_weights(T: CombinatorialTriangulation, w: tuple[int, ...], e: int) -> tuple[int, ...]:
    """Weights of one arc after flipping edge ``e`` of ``T``."""
    if w[e] == -1:
        out = [0] * len(w)
        out[e] = 1
        return tuple(out)
    if min(w) < 0:
        return w
    h1, h2, k1, k2 = T.square(e)
    d1 = decompose(w[e], w[edge_of(h1)], w[edge_of(h2)])
    d2 = decompose(w[e], w[edge_of(k1)], w[edge_of(k2)])
    a_p, _, a_v = d1.corners  # a_p at the tail of e, a_v at the apex
    _, b_p, b_v = d2.corners
    t1 = d1.terminals if d1.terminal_side == 0 else 0
    t2 = d2.terminals if d2.terminal_side == 0 else 0
    # along e from its tail: [a_p][t1][a_q] above, [b_p][t2][b_q] below
    if t1 and t2 and min(a_p + t1, b_p + t2) > max(a_p, b_p):
        if w[e] == 1 and sum(w) == 1:
            return unit_edge(len(w), e)
        raise InvalidInput("weights describe more than one arc")
    crossing_left = max(0, a_p - b_p - t2)
    crossing_right = max(0, b_p - a_p - t1)
    side_terminals = sum(
        d.terminals for d in (d1, d2) if d.terminal_side is not None and d.terminal_side != 0
    )
    out = list(w)
    out[e] = a_v + b_v + side_terminals + crossing_left + crossing_right
    return tuple(out)


def transport(
    maps: Sequence[CombinatorialTriangulation], word: Sequence[int], w: tuple[int, ...]
) -> tuple[int, ...]:
    """Push ``w`` along ``word``; ``maps[i]`` is the triangulation before flip ``i``."""
    for T, e in zip(maps, word, strict=True):
        w = flip_weights(T, w, e)
    return w


def maps_along(
    T: CombinatorialTriangulation, word: Sequence[int]
) -> list[CombinatorialTriangulation]:
    """Triangulations visited by ``word`` (before each flip), plus the final one."""
    out = [T]
    for e in word:
        T = T.flip(e)
        out.append(T)
    return out


# ── Strand tracing ──────────────────────────────────────────────────────────


@dataclass(frozen=True)
class Trace:
    components: int
    ends: tuple[int, ...]

    @property
    def is_arc(self) -> bool:
        return self.components == 1 and len(self.ends) == 2


def trace(T: CombinatorialTriangulation, w: tuple[int, ...]) -> Trace:
    """Count the connected pieces of the normal multi-arc with weights ``w``."""
    if min(w) < 0:
        raise InvalidInput("edge arcs are not traced")
    if any(w[e] for e in T.boundary):
        return Trace(0, ())
    points = [(e, p) for e in range(T.num_edges) for p in range(w[e])]
    if not points:
        return Trace(0, ())
    uf = UnionFind(points)
    terminal_points: list[tuple[tuple[int, int], int]] = []
    for tri in T.triangles:
        xs = [w[edge_of(h)] for h in tri]
        d = decompose(*xs)

        def point(side: int, pos: int, tri=tri, xs=xs) -> tuple[int, int]:
            h = tri[side]
            return (h, pos) if h >= 0 else (~h, xs[side] - 1 - pos)

        for i in range(3):
            prv = (i + 2) % 3
            for k in range(d.corners[i]):
                uf.union(point(prv, xs[prv] - 1 - k), point(i, k))
        if d.terminal_side is not None:
            i = d.terminal_side
            apex = T.tail(tri[(i + 2) % 3])
            for j in range(d.terminals):
                terminal_points.append((point(i, d.corners[i] + j), apex))
    roots = {uf[p] for p in points}
    ends = tuple(sorted(apex for _, apex in terminal_points))
    return Trace(len(roots), ends)


def compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """All nonnegative integer vectors of length ``parts`` summing to ``total``."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in compositions(total - first, parts - 1):
            yield (first, *rest)


# ── Reference triangulations ────────────────────────────────────────────────


class _Builder:
    """Grows a triangulated surface one local move at a time."""

    def __init__(self) -> None:
        self.triangles: list[tuple[int, int, int]] = []
        self.edges = 0
        self.boundary: set[int] = set()
        self.curves: list[list[int]] = []
        self.punctures = 0

    def new_edge(self) -> int:
        self.edges += 1
        return self.edges - 1

    def freeze(self) -> CombinatorialTriangulation:
        return CombinatorialTriangulation(
            tuple(self.triangles), self.edges, frozenset(self.boundary)
        )

    def _fan(self, sides: Sequence[int]) -> None:
        m = len(sides)
        diagonals = {j: self.new_edge() for j in range(2, m - 1)}
        for j in range(1, m - 1):
            a = sides[0] if j == 1 else diagonals[j]
            c = sides[m - 1] if j + 1 == m - 1 else ~diagonals[j + 1]
            self.triangles.append((a, sides[j], c))

    # ── bases ──────────────────────────────────────────────────────────────

    def polygon(self, n: int) -> None:
        sides = [self.new_edge() for _ in range(n)]
        self.boundary.update(sides)
        self.curves.append(sides)
        self._fan(sides)

    def closed_genus(self, g: int) -> None:
        """4g-gon with word a1 b1 a1⁻¹ b1⁻¹ …; all corners become one puncture."""
        sides: list[int] = []
        for _ in range(g):
            a, b = self.new_edge(), self.new_edge()
            sides += [a, b, ~a, ~b]
        self._fan(sides)
        self.punctures = 1

    def thrice_punctured_sphere(self) -> None:
        e0, e1, e2 = self.new_edge(), self.new_edge(), self.new_edge()
        self.triangles += [(e0, e1, e2), (~e0, ~e2, ~e1)]
        self.punctures = 3

    def punctured_monogon(self) -> None:
        loop, spoke = self.new_edge(), self.new_edge()
        self.boundary.add(loop)
        self.curves.append([loop])
        self.triangles.append((loop, spoke, ~spoke))
        self.punctures = 1

    # ── moves ──────────────────────────────────────────────────────────────

    def add_puncture(self, t: int) -> None:
        h0, h1, h2 = self.triangles[t]
        u0, u1, u2 = self.new_edge(), self.new_edge(), self.new_edge()
        self.triangles[t] = (h0, u1, ~u0)
        self.triangles += [(h1, u2, ~u1), (h2, u0, ~u2)]
        self.punctures += 1

    def blow_up(self) -> None:
        """Replace the most recent puncture by a boundary curve with one marked point."""
        T = self.freeze()
        inner = [v for v in T.vertices if v not in T.boundary_vertices]
        if not inner:
            raise InvalidInput("no puncture left to open into a boundary curve")
        target = max(inner)
        for t, tri in enumerate(self.triangles):
            for s, h in enumerate(tri):
                if T.tail(h) == target:
                    hi, hj, hk = tri[s], tri[(s + 1) % 3], tri[(s + 2) % 3]
                    loop, spoke = self.new_edge(), self.new_edge()
                    self.triangles[t] = (hi, spoke, loop)
                    self.triangles.append((hj, hk, ~spoke))
                    self.boundary.add(loop)
                    self.curves.append([loop])
                    self.punctures -= 1
                    return
        raise InvalidInput("puncture has no corner")  # pragma: no cover

    def add_boundary_point(self, curve: int) -> None:
        segment = self.curves[curve][-1]
        for t, tri in enumerate(self.triangles):
            if segment in tri:
                s = tri.index(segment)
                hj, hk = tri[(s + 1) % 3], tri[(s + 2) % 3]
                second, spoke = self.new_edge(), self.new_edge()
                self.triangles[t] = (segment, spoke, hk)
                self.triangles.append((second, hj, ~spoke))
                self.boundary.add(second)
                self.curves[curve].append(second)
                return
        raise InvalidInput(f"boundary segment {segment} not found")  # pragma: no cover

    def renumbered(self) -> CombinatorialTriangulation:
        interior = [e for e in range(self.edges) if e not in self.boundary]
        order = interior + sorted(self.boundary)
        new_index = {old: new for new, old in enumerate(order)}

        def relabel(h: int) -> int:
            return new_index[h] if h >= 0 else ~new_index[~h]

        triangles = tuple(tuple(relabel(h) for h in tri) for tri in self.triangles)
        return CombinatorialTriangulation(
            triangles,  # type: ignore[arg-type]
            self.edges,
            frozenset(new_index[e] for e in self.boundary),
        )


def reference_triangulation(spec: SurfaceSpec) -> CombinatorialTriangulation:
    """A deterministic ideal triangulation whose vertices are exactly the marked points."""
    if spec.omega < 1:
        raise InvalidInput(f"{spec.describe()} has complexity {spec.omega} < 1")
    builder = _Builder()
    components = spec.b + spec.p
    if spec.genus >= 1:
        builder.closed_genus(spec.genus)
    elif spec.is_polygon:
        builder.polygon(spec.boundary_points[0])
    elif components >= 3:
        builder.thrice_punctured_sphere()
    elif components == 2 and spec.b >= 1:
        builder.punctured_monogon()
    else:
        raise InvalidInput(f"no reference triangulation for {spec.describe()}")

    while builder.punctures + len(builder.curves) < components:
        builder.add_puncture(0)
    while len(builder.curves) < spec.b:
        builder.blow_up()
    for idx, count in enumerate(spec.boundary_points):
        while len(builder.curves[idx]) < count:
            builder.add_boundary_point(idx)

    T = builder.renumbered()
    if len(T.interior_edges) != spec.omega:
        raise InvalidInput(  # pragma: no cover
            f"reference triangulation has {len(T.interior_edges)} arcs, expected {spec.omega}"
        )
    logger.debug(
        "Reference triangulation for %s: %d triangles, %d edges",
        spec.describe(),
        len(T.triangles),
        T.num_edges,
    )
    return T


# ── Isometries ──────────────────────────────────────────────────────────────


def isometries(
    source: CombinatorialTriangulation, target: CombinatorialTriangulation
) -> list[dict[int, int]]:
    """Orientation-preserving half-edge bijections carrying ``source`` onto ``target``."""
    if source.num_edges != target.num_edges or len(source.triangles) != len(target.triangles):
        return []
    start = source.triangles[0][0]
    found: list[dict[int, int]] = []
    for tri in target.triangles:
        for image in tri:
            mapping = _extend(source, target, start, image)
            if mapping is not None and mapping not in found:
                found.append(mapping)
    return found


def _extend(
    source: CombinatorialTriangulation, target: CombinatorialTriangulation, h: int, image: int
) -> dict[int, int] | None:
    mapping: dict[int, int] = {}
    used: set[int] = set()
    queue = deque([(h, image)])
    while queue:
        a, b = queue.popleft()
        if a in mapping:
            if mapping[a] != b:
                return None
            continue
        if b in used:
            return None
        if source.has(~a) != target.has(~b):
            return None
        mapping[a] = b
        used.add(b)
        queue.append((source.next_half(a), target.next_half(b)))
        if source.has(~a):
            queue.append((~a, ~b))
    if len(mapping) != len(source._where):
        return None
    return mapping


def flip_word_search(
    start: CombinatorialTriangulation, depth: int, cap: int
) -> Iterator[tuple[tuple[int, ...], CombinatorialTriangulation]]:
    """Breadth-first flip words from ``start`` up to ``depth`` (distinct triangulations)."""
    seen = {start.triangles}
    frontier: deque[tuple[tuple[int, ...], CombinatorialTriangulation]] = deque([((), start)])
    visited = 0
    while frontier:
        word, T = frontier.popleft()
        yield word, T
        visited += 1
        if visited > cap:
            raise SearchBoundExhausted(f"flip-word search passed {cap} triangulations")
        if len(word) >= depth:
            continue
        for e in T.interior_edges:
            if not T.is_flippable(e):
                continue
            nxt = T.flip(e)
            if nxt.triangles in seen:
                continue
            seen.add(nxt.triangles)
            frontier.append(((*word, e), nxt))


# ── Cutting ─────────────────────────────────────────────────────────────────


def cut_open(
    T: CombinatorialTriangulation, cut: set[int]
) -> list[tuple[SurfaceSpec, tuple[int, ...]]]:
    """Components of ``T`` cut along the interior edges ``cut``.

    Each component comes with the parent labels of its marked points: boundary
    points curve by curve in boundary order, then punctures in ascending order.
    """
    n = len(T.triangles)
    faces = UnionFind(range(n))
    corners = UnionFind([(t, s) for t in range(n) for s in range(3)])
    kept = [e for e in T.interior_edges if e not in cut]
    for e in kept:
        t1, s1 = T.where(e)
        t2, s2 = T.where(~e)
        faces.union(t1, t2)
        corners.union((t1, s1), (t2, (s2 + 1) % 3))
        corners.union((t1, (s1 + 1) % 3), (t2, s2))

    segments = [h for e in sorted(T.boundary | cut) for h in (e, ~e) if T.has(h)]
    outgoing = {corners[T.where(h)]: h for h in segments}

    def label(corner: tuple[int, int]) -> int:
        t, s = corner
        return T.tail(T.triangles[t][s])

    out: list[tuple[SurfaceSpec, tuple[int, ...]]] = []
    for component in sorted(faces.to_sets(), key=min):
        classes = {corners[(t, s)] for t in component for s in range(3)}
        own_segments = [h for h in segments if T.where(h)[0] in component]
        inner = sum(1 for e in kept if T.where(e)[0] in component)
        chi = len(classes) - inner - len(own_segments) + len(component)

        seen: set[int] = set()
        curves: list[list[int]] = []
        for h in own_segments:
            if h in seen:
                continue
            curve: list[int] = []
            cur = h
            while cur not in seen:
                seen.add(cur)
                t, s = T.where(cur)
                curve.append(label((t, s)))
                nxt = outgoing.get(corners[(t, (s + 1) % 3)])
                if nxt is None:
                    raise InvalidInput("cut boundary does not close up")  # pragma: no cover
                cur = nxt
            curves.append(curve)

        b = len(curves)
        if (2 - b - chi) % 2:
            raise InvalidInput("cut component has non-integral genus")  # pragma: no cover
        punctures = sorted(
            label(_any_corner(corners, c, component)) for c in classes - outgoing.keys()
        )
        spec = SurfaceSpec(
            genus=(2 - b - chi) // 2,
            boundary_points=tuple(len(c) for c in curves),
            interior_points=len(punctures),
        )
        out.append((spec, tuple(v for c in curves for v in c) + tuple(punctures)))
    return out


def _any_corner(
    corners: UnionFind, root: tuple[int, int], component: set[int]
) -> tuple[int, int]:
    for t in sorted(component):
        for s in range(3):
            if corners[(t, s)] == root:
                return (t, s)
    raise InvalidInput("corner class outside its component")  # pragma: no cover

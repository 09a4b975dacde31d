"""
embed.py – Vertex maps between multiarc graphs and the structural checks
around simplicial embeddings: sub-polygon embeddings padded by ν, the
permutation property of triangles, cliques versus triangulations, and
preservation of topological type.
"""

from __future__ import annotations

import logging
from collections import Counter
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from itertools import combinations

import networkx as nx

from arcgraphs.services.arcs import Chord, Multiarc
from arcgraphs.services.errors import IncompleteGraphError, InvalidInput
from arcgraphs.services.multiarc_graph import MultiarcGraph, all_multiarcs, build
from arcgraphs.services.polygon import PolygonSurface
from arcgraphs.services.verdict import Verdict

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class VertexMap:
    source: MultiarcGraph
    target: MultiarcGraph
    images: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.images) != len(self.source):
            raise InvalidInput("a vertex map must be total on its source")

    def __call__(self, i: int) -> int:
        return self.images[i]


def is_simplicial_embedding(m: VertexMap) -> bool:
    """Injective and edge-preserving."""
    if len(set(m.images)) != len(m.images):
        return False
    return all(m.target.has_edge(m(i), m(j)) for i, j in m.source.edges)


# ── Sub-polygon embeddings ───────────────────────────────────────────────────


@dataclass(frozen=True)
class SurfaceEmbedding:
    """An m-gon sitting in an n-gon as a piece of the cut along ``nu``."""

    target: PolygonSurface
    face: tuple[int, ...]  # target vertex of each source vertex, ascending
    nu: Multiarc

    @property
    def source(self) -> PolygonSurface:
        return PolygonSurface(len(self.face))

    def map_arc(self, a: Chord) -> Chord:
        return Chord(self.face[a.i], self.face[a.j])

    def map_multiarc(self, mu: Multiarc) -> Multiarc:
        return Multiarc.of(self.map_arc(a) for a in mu)  # type: ignore[arg-type]


def identity_embedding(target: PolygonSurface) -> SurfaceEmbedding:
    return SurfaceEmbedding(target, tuple(range(target.n)), Multiarc(()))


def sub_polygon_embeddings(target: PolygonSurface, nu: Multiarc) -> list[SurfaceEmbedding]:
    """Every piece of positive complexity of the cut along ``nu``."""
    target.check_multiarc(nu)
    result = target.cut(nu.arcs)
    return [
        SurfaceEmbedding(target, face, nu)
        for spec, face in zip(result.components, result.embeddings)
        if spec.omega >= 1
    ]


def induced_map(
    embedding: SurfaceEmbedding,
    k1: int,
    source: MultiarcGraph | None = None,
    target: MultiarcGraph | None = None,
) -> VertexMap:
    """μ ↦ f(μ) ∪ ν from A^[k1] of the piece into A^[k1+|ν|] of the whole polygon."""
    k2 = k1 + len(embedding.nu)
    if k2 > embedding.target.omega:
        raise InvalidInput(f"k1 + |ν| = {k2} exceeds ω = {embedding.target.omega}")
    source = source or build(embedding.source, k1)
    target = target or build(embedding.target, k2)
    images: list[int] = []
    for mu in source.vertices:
        image = embedding.map_multiarc(mu)
        for a in image:
            for b in embedding.nu:
                if a == b or not embedding.target.disjoint(a, b):
                    raise InvalidInput(f"padding {embedding.nu} meets the image arc {a}")
        images.append(target.index_of(image.union(embedding.nu)))
    return VertexMap(source, target, tuple(images))


def embedding_check(
    embedding: SurfaceEmbedding,
    k1: int,
    source: MultiarcGraph | None = None,
    target: MultiarcGraph | None = None,
) -> Verdict:
    """The padded map is a simplicial embedding whose image is the whole stratum of ν."""
    m = induced_map(embedding, k1, source, target)
    stratum_size = sum(
        1
        for mu in m.target.vertices
        if embedding.nu.issubset(mu) and set(mu.minus(embedding.nu)) <= _face_arcs(embedding)
    )
    simplicial = is_simplicial_embedding(m)
    onto = len(set(m.images)) == stratum_size
    return Verdict(
        check="embedding",
        instance=(
            f"{len(embedding.face)}-gon ↪ {embedding.target.n}-gon, ν={embedding.nu}, k1={k1}"
        ),
        holds=simplicial and onto,
        details={"simplicial": simplicial, "image": len(set(m.images)), "stratum": stratum_size},
    )


def _face_arcs(embedding: SurfaceEmbedding) -> set[Chord]:
    return {embedding.map_arc(a) for a in embedding.source.arcs}


def embedding_sweep(
    target: PolygonSurface, paddings: Iterable[Multiarc] | None = None
) -> Verdict:
    """``embedding_check`` for every padding ν, every piece of the cut and every k1.

    Pairs (piece, k1) whose edges are flips while the padded target's edges
    are disjointness, or the other way round, are skipped and counted.
    """
    if paddings is None:
        paddings = [
            nu
            for size in range(1, target.omega)
            for nu in all_multiarcs(target, size, target.arcs)
        ]
    sources: dict[tuple[int, int], MultiarcGraph] = {}
    targets: dict[int, MultiarcGraph] = {}
    checked = skipped = 0
    failures: list[str] = []
    for nu in paddings:
        for emb in sub_polygon_embeddings(target, nu):
            piece = emb.source.omega
            for k1 in range(1, piece + 1):
                k2 = k1 + len(nu)
                if k2 > target.omega:
                    break
                if k1 == piece and k2 != target.omega:
                    skipped += 1
                    continue
                key = (len(emb.face), k1)
                if key not in sources:
                    sources[key] = build(emb.source, k1)
                if k2 not in targets:
                    targets[k2] = build(target, k2)
                checked += 1
                verdict = embedding_check(emb, k1, sources[key], targets[k2])
                if not verdict.holds:
                    failures.append(verdict.instance)
    if failures:
        logger.error("Padded embedding failed in %d case(s)", len(failures))
    return Verdict(
        check="embedding-sweep",
        instance=target.spec.describe(),
        holds=not failures,
        witnesses=failures[:10],
        details={"checked": checked, "skipped_regime": skipped},
    )


# ── Triangles that permute k+1 arcs ──────────────────────────────────────────


def _permuting(mus: Sequence[Multiarc], k: int) -> Multiarc | None:
    union = Multiarc.of(set().union(*(set(mu) for mu in mus)))
    common = mus[0].intersection(mus[1]).intersection(mus[2])
    if len(union) == k + 1 and len(common) == k - 2:
        return union
    return None


def check_permute(graph: MultiarcGraph, triple: Sequence[Multiarc]) -> Verdict:
    """Every vertex adjacent to a permuting triangle uses the same k+1 arcs."""
    if len(triple) != 3:
        raise InvalidInput("check_permute needs exactly three vertices")
    if graph.k < 2:
        raise InvalidInput("permuting triangles need k ≥ 2")
    idx = [graph.index_of(mu) for mu in triple]
    for i, j in combinations(idx, 2):
        if not graph.has_edge(i, j):
            raise InvalidInput(f"{graph.vertices[i]} and {graph.vertices[j]} are not adjacent")
    union = _permuting(triple, graph.k)
    if union is None:
        raise InvalidInput("the triangle does not permute k+1 arcs")
    common = set(graph.neighbors(idx[0]))
    common &= set(graph.neighbors(idx[1]))
    common &= set(graph.neighbors(idx[2]))
    violators = [graph.label(w) for w in sorted(common) if not graph.vertices[w].issubset(union)]
    return Verdict(
        check="permute",
        instance=" / ".join(str(mu) for mu in triple),
        holds=not violators,
        witnesses=violators,
        details={"common_neighbors": len(common), "arcs": str(union)},
    )


def permute_sweep(graph: MultiarcGraph) -> Verdict:
    """``check_permute`` over every permuting triangle of ``graph``."""
    if not graph.complete:
        raise IncompleteGraphError("the permute sweep needs a complete graph")
    checked = 0
    witnesses: list[dict[str, object]] = []
    for u, v in graph.edges:
        for w in graph.neighbors(v):
            if w <= v or not graph.has_edge(u, w):
                continue
            triple = [graph.vertices[u], graph.vertices[v], graph.vertices[w]]
            if _permuting(triple, graph.k) is None:
                continue
            checked += 1
            verdict = check_permute(graph, triple)
            if not verdict.holds:
                witnesses.append({"triple": verdict.instance, "violators": verdict.witnesses})
    if witnesses:
        logger.error("Permute property failed on %d triangle(s)", len(witnesses))
    return Verdict(
        check="permute-sweep",
        instance=f"{graph.surface.spec.describe()} k={graph.k}",
        holds=not witnesses,
        witnesses=witnesses[:10],
        details={"triangles": checked},
    )


# ── Cliques and triangulations ───────────────────────────────────────────────


def cliques_to_triangulations(arc_graph: MultiarcGraph) -> Verdict:
    """Maximum cliques of A^[1] are triangulations, and sharing ω−1 arcs is flipping."""
    if arc_graph.k != 1 or not arc_graph.complete:
        raise InvalidInput("cliques are read off a complete A^[1]")
    surface = arc_graph.surface
    omega = surface.omega
    if omega == 1:
        cliques = [Multiarc(mu.arcs) for mu in arc_graph.vertices]
    else:
        cliques = [
            Multiarc.of(a for i in clique for a in arc_graph.vertices[i])
            for clique in nx.find_cliques(arc_graph.as_networkx)
        ]
    sizes = Counter(len(c) for c in cliques)
    flip_graph = build(surface, omega)
    unexpected = [str(c) for c in cliques if len(c) != omega]
    bijective = set(cliques) == set(flip_graph.vertices) and len(cliques) == len(flip_graph)

    index = {c: i for i, c in enumerate(sorted(cliques))}
    derived = {
        (index[a], index[b])
        for a, b in combinations(sorted(cliques), 2)
        if len(a.intersection(b)) == omega - 1
    }
    flips = {
        (index[flip_graph.vertices[i]], index[flip_graph.vertices[j]])
        for i, j in flip_graph.edges
        if flip_graph.vertices[i] in index and flip_graph.vertices[j] in index
    }
    isomorphic = bijective and derived == flips
    return Verdict(
        check="cliques",
        instance=surface.spec.describe(),
        holds=not unexpected and isomorphic,
        witnesses=unexpected[:10],
        details={
            "cliques": len(cliques),
            "sizes": {str(k): v for k, v in sorted(sizes.items())},
            "triangulations": len(flip_graph),
            "bijective": bijective,
            "isomorphic": isomorphic,
        },
    )


# ── Topological type ─────────────────────────────────────────────────────────


def type_preservation(m: VertexMap) -> Verdict:
    """Arcs keep their topological type under a map between arc graphs."""
    if m.source.k != 1 or m.target.k != 1:
        raise InvalidInput("type preservation compares arc graphs (k = 1)")
    changed: list[str] = []
    for i, mu in enumerate(m.source.vertices):
        (a,) = mu.arcs
        (b,) = m.target.vertices[m(i)].arcs
        if m.source.surface.topological_type(a) != m.target.surface.topological_type(b):
            changed.append(f"{a} ↦ {b}")
    return Verdict(
        check="type-preservation",
        instance=f"{m.source.surface.spec.describe()} → {m.target.surface.spec.describe()}",
        holds=not changed,
        witnesses=changed[:10],
        details={"arcs": len(m.source), "changed": len(changed)},
    )

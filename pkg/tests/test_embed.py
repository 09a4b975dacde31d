"""Tests for padded sub-polygon embeddings, permuting triangles, cliques and arc types."""

from __future__ import annotations

import pytest
from conftest import mu

from arcgraphs.services import embed, symmetry
from arcgraphs.services.arcs import Chord
from arcgraphs.services.errors import IncompleteGraphError, InvalidInput
from arcgraphs.services.multiarc_graph import MultiarcGraph, build
from arcgraphs.services.polygon import PolygonSurface


def test_identity_embedding(hexagon: PolygonSurface, hexagon_a2: MultiarcGraph) -> None:
    emb = embed.identity_embedding(hexagon)
    assert emb.source.n == 6
    verdict = embed.embedding_check(emb, 2, target=hexagon_a2)
    assert verdict.holds
    assert verdict.details["image"] == verdict.details["stratum"] == 21


def test_sub_polygon_embeddings(hexagon: PolygonSurface) -> None:
    pieces = embed.sub_polygon_embeddings(hexagon, mu((0, 3)))
    assert [p.face for p in pieces] == [(0, 1, 2, 3), (0, 3, 4, 5)]
    assert pieces[1].map_arc(Chord(0, 2)) == Chord(0, 4)
    assert pieces[1].map_multiarc(mu((1, 3))) == mu((3, 5))


def test_triangles_are_not_pieces(hexagon: PolygonSurface) -> None:
    pieces = embed.sub_polygon_embeddings(hexagon, mu((0, 2), (0, 3)))
    assert [p.face for p in pieces] == [(0, 3, 4, 5)]


def test_padded_quadrilateral_reaches_flips(hexagon: PolygonSurface) -> None:
    (piece,) = embed.sub_polygon_embeddings(hexagon, mu((0, 2), (0, 3)))
    verdict = embed.embedding_check(piece, 1)
    assert verdict.holds
    m = embed.induced_map(piece, 1)
    assert {m.target.vertices[i] for i in m.images} == {
        mu((0, 2), (0, 3), (0, 4)),
        mu((0, 2), (0, 3), (3, 5)),
    }


def test_flip_edges_do_not_survive_partial_padding(hexagon: PolygonSurface) -> None:
    # the quadrilateral's flip lands on two crossing arcs while k2 < ω
    pieces = embed.sub_polygon_embeddings(hexagon, mu((0, 3)))
    verdict = embed.embedding_check(pieces[1], 1)
    assert not verdict.holds
    assert verdict.details["simplicial"] is False


def test_induced_map_rejects_bad_padding(hexagon: PolygonSurface) -> None:
    overlapping = embed.SurfaceEmbedding(hexagon, (0, 1, 2, 3), mu((0, 2)))
    with pytest.raises(InvalidInput):
        embed.induced_map(overlapping, 1)
    (piece,) = embed.sub_polygon_embeddings(hexagon, mu((0, 2), (0, 3)))
    with pytest.raises(InvalidInput):
        embed.induced_map(piece, 2)


@pytest.mark.parametrize("n", [5, 6, 7])
def test_embedding_sweep(n: int) -> None:
    verdict = embed.embedding_sweep(PolygonSurface(n))
    assert verdict.holds, verdict.witnesses
    assert verdict.details["checked"] > 0
    # quadrilateral pieces padded below ω only appear from the hexagon on
    assert (verdict.details["skipped_regime"] > 0) == (n > 5)


def test_embedding_sweep_with_one_padding(hexagon: PolygonSurface) -> None:
    verdict = embed.embedding_sweep(hexagon, [mu((0, 2))])
    assert verdict.holds
    assert verdict.details["checked"] == 2


# ── Vertex maps ──────────────────────────────────────────────────────────────


def test_vertex_map_must_be_total(hexagon_a1: MultiarcGraph) -> None:
    with pytest.raises(InvalidInput):
        embed.VertexMap(hexagon_a1, hexagon_a1, (0, 1))


def test_simplicial_embedding(hexagon_a1: MultiarcGraph) -> None:
    identity = embed.VertexMap(hexagon_a1, hexagon_a1, tuple(range(len(hexagon_a1))))
    assert embed.is_simplicial_embedding(identity)
    constant = embed.VertexMap(hexagon_a1, hexagon_a1, (0,) * len(hexagon_a1))
    assert not embed.is_simplicial_embedding(constant)


# ── Permuting triangles ──────────────────────────────────────────────────────


def test_check_permute(hexagon_a2: MultiarcGraph) -> None:
    triple = [mu((0, 2), (0, 3)), mu((0, 3), (0, 4)), mu((0, 2), (0, 4))]
    verdict = embed.check_permute(hexagon_a2, triple)
    assert verdict.holds
    assert verdict.details["arcs"] == str(mu((0, 2), (0, 3), (0, 4)))


def test_check_permute_preconditions(
    hexagon_a1: MultiarcGraph, hexagon_a2: MultiarcGraph
) -> None:
    with pytest.raises(InvalidInput):
        embed.check_permute(hexagon_a2, [mu((0, 2), (0, 3)), mu((0, 3), (0, 4))])
    with pytest.raises(InvalidInput):
        embed.check_permute(hexagon_a1, [mu((0, 2)), mu((0, 3)), mu((0, 4))])
    with pytest.raises(InvalidInput):
        embed.check_permute(
            hexagon_a2, [mu((0, 2), (0, 3)), mu((0, 3), (0, 4)), mu((1, 3), (1, 4))]
        )


def test_permute_sweep(hexagon_a2: MultiarcGraph, hexagon_a3: MultiarcGraph) -> None:
    verdict = embed.permute_sweep(hexagon_a2)
    assert verdict.holds
    assert verdict.details["triangles"] > 0
    # the hexagon flip graph has no triangles
    assert embed.permute_sweep(hexagon_a3).details["triangles"] == 0


def test_permute_sweep_on_heptagon() -> None:
    assert embed.permute_sweep(build(PolygonSurface(7), 2)).holds


def test_permute_sweep_on_octagon_triples() -> None:
    verdict = embed.permute_sweep(build(PolygonSurface(8), 3))
    assert verdict.holds, verdict.witnesses
    assert verdict.details["triangles"] == 1320


def test_permute_sweep_needs_a_complete_graph(hexagon: PolygonSurface) -> None:
    ball = build(hexagon, 2, "ball", center=mu((0, 2), (0, 3)), radius=1)
    with pytest.raises(IncompleteGraphError):
        embed.permute_sweep(ball)


# ── Cliques and types ────────────────────────────────────────────────────────


@pytest.mark.parametrize(("n", "count"), [(4, 2), (5, 5), (6, 14), (7, 42)])
def test_cliques_are_triangulations(n: int, count: int) -> None:
    verdict = embed.cliques_to_triangulations(build(PolygonSurface(n), 1))
    assert verdict.holds
    assert verdict.details["cliques"] == verdict.details["triangulations"] == count
    assert verdict.details["sizes"] == {str(n - 3): count}


def test_cliques_need_the_arc_graph(hexagon_a2: MultiarcGraph) -> None:
    with pytest.raises(InvalidInput):
        embed.cliques_to_triangulations(hexagon_a2)


def test_dihedral_maps_preserve_types(hexagon_a1: MultiarcGraph) -> None:
    for g in symmetry.mapping_classes(hexagon_a1.surface):
        F = symmetry.from_mapping_class(hexagon_a1, g)
        assert embed.type_preservation(embed.VertexMap(hexagon_a1, hexagon_a1, F.perm)).holds


def test_swapping_an_ear_and_a_diameter_changes_types(hexagon_a1: MultiarcGraph) -> None:
    ear, diameter = hexagon_a1.index_of(mu((0, 2))), hexagon_a1.index_of(mu((0, 3)))
    images = list(range(len(hexagon_a1)))
    images[ear], images[diameter] = diameter, ear
    verdict = embed.type_preservation(embed.VertexMap(hexagon_a1, hexagon_a1, tuple(images)))
    assert not verdict.holds
    assert verdict.details["changed"] == 2

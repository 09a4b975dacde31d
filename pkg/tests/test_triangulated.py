"""Tests for the normal-coordinate surface backend."""

from __future__ import annotations

import pytest

from arcgraphs.services.arcs import Multiarc, NormalArc
from arcgraphs.services.errors import InvalidInput
from arcgraphs.services.multiarc_graph import build
from arcgraphs.services.surface import SurfaceSpec
from arcgraphs.services.triangulated import TriangulatedSurface


@pytest.fixture(scope="module")
def quadrilateral() -> TriangulatedSurface:
    return TriangulatedSurface(SurfaceSpec.polygon(4))


@pytest.fixture(scope="module")
def hexagon_t() -> TriangulatedSurface:
    return TriangulatedSurface(SurfaceSpec.polygon(6))


@pytest.fixture(scope="module")
def four_punctured_sphere() -> TriangulatedSurface:
    return TriangulatedSurface(SurfaceSpec.punctured_sphere(4))


def test_quadrilateral_has_two_arcs(quadrilateral: TriangulatedSurface) -> None:
    pool = quadrilateral.enumerate_arcs(2)
    assert set(pool) == {NormalArc((-1,)), NormalArc((1,))}
    assert pool.complete
    assert quadrilateral.intersection_number(NormalArc((-1,)), NormalArc((1,))) == 1


def test_reference_arcs_are_edges(hexagon_t: TriangulatedSurface) -> None:
    assert len(hexagon_t.reference_arcs) == hexagon_t.omega == 3
    assert all(a.is_edge for a in hexagon_t.reference_arcs)
    for a in hexagon_t.reference_arcs:
        tail, head = hexagon_t.endpoints(a)
        assert tail in hexagon_t.marked_points
        assert head in hexagon_t.marked_points


def test_hexagon_agrees_with_polygon_backend(hexagon_t: TriangulatedSurface) -> None:
    pool = hexagon_t.enumerate_arcs()
    assert len(pool) == 9
    assert pool.complete
    arc_graph = build(hexagon_t, 1)
    assert (len(arc_graph), len(arc_graph.edges)) == (9, 21)
    flip_graph = build(hexagon_t, 3)
    assert (len(flip_graph), len(flip_graph.edges)) == (14, 21)


def test_arc_json(hexagon_t: TriangulatedSurface) -> None:
    a = hexagon_t.reference_arcs[1]
    assert hexagon_t.arc_from_json(hexagon_t.arc_to_json(a)) == a
    assert hexagon_t.arc_from_json(list(a.coords)) == a


@pytest.mark.parametrize(
    "coords",
    [
        [-1, -1, 0],
        [-1, 2, 0],
        [0, 0, 0, 0],
        [0, -2, 0],
        ["a", 0, 0],
    ],
)
def test_check_arc_rejects(hexagon_t: TriangulatedSurface, coords: list) -> None:
    with pytest.raises(InvalidInput):
        hexagon_t.arc_from_json({"coords": coords})


def test_four_punctured_sphere(four_punctured_sphere: TriangulatedSurface) -> None:
    S = four_punctured_sphere
    assert len(S.reference_arcs) == 6
    assert len(S.marked_points) == 4
    assert not any(S.is_separating(a) for a in S.reference_arcs)


def test_flip_transports_the_new_edge(four_punctured_sphere: TriangulatedSurface) -> None:
    S = four_punctured_sphere
    triangulation = Multiarc.of(S.reference_arcs)
    old = S.reference_arcs[0]
    flipped = S.flip(triangulation, old)
    (new,) = flipped.minus(triangulation).arcs
    assert not new.is_edge
    assert S.intersection_number(old, new) == 1
    assert len(flipped) == S.omega
    S.check_multiarc(flipped)


def test_flip_needs_a_triangulation(four_punctured_sphere: TriangulatedSurface) -> None:
    S = four_punctured_sphere
    with pytest.raises(InvalidInput):
        S.flip(Multiarc.of(S.reference_arcs[:2]), S.reference_arcs[0])


def test_one_holed_torus() -> None:
    S = TriangulatedSurface(SurfaceSpec(genus=1, boundary_points=[1]))
    assert S.omega == 4
    assert all(S.is_nonseparating_or_ear(a) for a in S.reference_arcs)
    assert not any(S.is_separating(a) for a in S.reference_arcs)


def test_mapping_classes_act_on_arcs(four_punctured_sphere: TriangulatedSurface) -> None:
    S = four_punctured_sphere
    for g in S.mapping_classes(depth=1, limit=4):
        assert not g.is_identity
        images = [g.apply(a) for a in S.reference_arcs]
        S.check_multiarc(Multiarc.of(images))
        orbit = list(g.powers(S.reference_arcs[0], 2))
        assert len(orbit) == 3
        assert orbit[0] == S.reference_arcs[0]

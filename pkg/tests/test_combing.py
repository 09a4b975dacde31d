"""Tests for combing, collapse detection, assignments and geodesic surgery."""

from __future__ import annotations

import pytest
from conftest import mu

from arcgraphs.services import combing
from arcgraphs.services.arcs import Chord, OrientedArc
from arcgraphs.services.errors import InvalidInput
from arcgraphs.services.multiarc_graph import MultiarcGraph, build
from arcgraphs.services.paths import Path, is_valid
from arcgraphs.services.polygon import PolygonSurface
from arcgraphs.services.surface import SurfaceSpec
from arcgraphs.services.triangulated import TriangulatedSurface


@pytest.mark.parametrize(
    ("n", "x", "head", "b", "expected"),
    [
        (5, (0, 2), 2, (1, 4), [(2, 4)]),
        (6, (0, 3), 3, (2, 5), [(3, 5)]),
        (6, (1, 4), 4, (0, 2), [(0, 4), (2, 4)]),
        (6, (0, 3), 3, (1, 5), [(1, 3), (3, 5)]),
    ],
)
def test_comb_images(n: int, x, head: int, b, expected) -> None:
    result = combing.comb(PolygonSurface(n), Chord(*b), OrientedArc(Chord(*x), head))
    assert list(result.images) == [Chord(*e) for e in expected]
    assert not result.collapsed


def test_comb_leaves_disjoint_arcs_alone(hexagon: PolygonSurface) -> None:
    result = combing.comb(hexagon, Chord(2, 4), OrientedArc(Chord(0, 2), 2))
    assert result.images == (Chord(2, 4),)


def test_comb_rejects_x_itself(hexagon: PolygonSurface) -> None:
    x_plus = OrientedArc(Chord(0, 3), 3)
    with pytest.raises(InvalidInput):
        combing.comb(hexagon, Chord(0, 3), x_plus)


def test_comb_is_polygon_only() -> None:
    surface = TriangulatedSurface(SurfaceSpec.polygon(5))
    a, b = surface.reference_arcs
    with pytest.raises(InvalidInput):
        combing.comb(surface, a, OrientedArc(b, surface.endpoints(b)[1]))


def test_collapse_and_combed_multiarc(hexagon: PolygonSurface) -> None:
    alpha = mu((0, 2), (0, 4), (2, 4))
    x_plus = OrientedArc(Chord(1, 4), 4)
    assert combing.detect_collapse(hexagon, alpha, x_plus) == Chord(0, 2)
    assert combing.comb_multiarc(hexagon, alpha, x_plus) == mu((0, 4), (2, 4))


def test_no_collapse_without_crossings(hexagon: PolygonSurface) -> None:
    alpha = mu((0, 2), (2, 4))
    assert combing.detect_collapse(hexagon, alpha, OrientedArc(Chord(0, 4), 4)) is None


def test_complete_to_triangulation(hexagon: PolygonSurface) -> None:
    completed = combing.complete_to_triangulation(hexagon, mu((0, 2)))
    assert completed == mu((0, 2), (0, 3), (0, 4))
    assert combing.complete_to_triangulation(hexagon, completed) == completed


def test_assignment_lands_in_combed_image(hexagon: PolygonSurface) -> None:
    x_plus = OrientedArc(Chord(1, 4), 4)
    chosen = combing.assignment(hexagon, mu((0, 2)), x_plus)
    assert chosen[Chord(0, 2)] in {Chord(0, 4), Chord(2, 4)}
    assert chosen.is_injective
    with pytest.raises(KeyError):
        chosen[Chord(0, 3)]


def test_assignment_of_a_triangulation_sends_collapse_to_x(hexagon: PolygonSurface) -> None:
    alpha = mu((0, 2), (0, 4), (2, 4))
    x_plus = OrientedArc(Chord(1, 4), 4)
    chosen = combing.assignment(hexagon, alpha, x_plus)
    assert chosen[Chord(0, 2)] == Chord(1, 4)
    assert chosen.image == mu((0, 4), (1, 4), (2, 4))


@pytest.mark.parametrize(
    ("n", "k"), [(5, 1), (5, 2), (6, 1), (6, 2), (6, 3), (7, 1), (7, 2), (7, 3)]
)
def test_comb_sweep(n: int, k: int) -> None:
    verdict = combing.comb_sweep(PolygonSurface(n), k)
    assert verdict.holds, verdict.witnesses
    assert verdict.details["cases"] > 0


def test_comb_sweep_rejects_k(hexagon: PolygonSurface) -> None:
    with pytest.raises(InvalidInput):
        combing.comb_sweep(hexagon, 4)


# ── Surgery ─────────────────────────────────────────────────────────────────


def test_surgery_shortcut(hexagon_a2: MultiarcGraph) -> None:
    path = Path((mu((0, 2), (2, 4)), mu((2, 4), (0, 4)), mu((0, 4), (0, 2))))
    out = combing.surgery(hexagon_a2, path, Chord(0, 2))
    assert out.path.vertices == (mu((0, 2), (2, 4)), mu((0, 2), (0, 4)))
    assert out.strategies == ("shortcut",)


def test_surgery_keeps_paths_inside_the_stratum(hexagon_a2: MultiarcGraph) -> None:
    path = Path((mu((0, 2), (2, 4)), mu((0, 2), (2, 5))))
    out = combing.surgery(hexagon_a2, path, OrientedArc(Chord(0, 2), 2))
    assert out.path == path
    assert out.strategies == ()


def test_surgery_needs_x_at_both_ends(hexagon_a2: MultiarcGraph) -> None:
    path = Path((mu((0, 2), (2, 4)), mu((2, 4), (0, 4))))
    with pytest.raises(InvalidInput):
        combing.surgery(hexagon_a2, path, Chord(0, 2))


def test_random_paths_share_x(hexagon: PolygonSurface, hexagon_a2: MultiarcGraph) -> None:
    sampled = combing.random_paths_through(hexagon_a2, 15, seed=7)
    assert len(sampled) == 15
    for path, x in sampled:
        assert x in path.start and x in path.end
        assert is_valid(hexagon, path)
    assert sampled == combing.random_paths_through(hexagon_a2, 15, seed=7)


@pytest.mark.parametrize(("n", "k"), [(6, 1), (6, 2), (6, 3), (7, 2)])
def test_surgery_sweep(n: int, k: int) -> None:
    graph = build(PolygonSurface(n), k)
    verdict = combing.surgery_sweep(graph, count=25, seed=11)
    assert verdict.holds, verdict.witnesses
    assert verdict.details["paths"] == 25


def test_x_disjoint_segments(hexagon: PolygonSurface) -> None:
    detour = Path((mu((0, 2), (2, 4)), mu((2, 4), (0, 4)), mu((0, 4), (0, 2))))
    assert combing.has_x_disjoint_segment(hexagon, detour, Chord(0, 2))
    inside = Path((mu((0, 2), (2, 4)), mu((0, 2), (2, 5))))
    assert not combing.has_x_disjoint_segment(hexagon, inside, Chord(0, 2))
    crossing = Path((mu((0, 3), (0, 4)), mu((0, 4), (1, 4)), mu((0, 3), (0, 4))))
    assert not combing.has_x_disjoint_segment(hexagon, crossing, Chord(0, 3))


@pytest.mark.parametrize(("n", "k"), [(6, 2), (7, 2), (7, 3)])
def test_surgery_sweep_shortens_x_disjoint_detours(n: int, k: int) -> None:
    verdict = combing.surgery_sweep(build(PolygonSurface(n), k), count=40, seed=3)
    assert verdict.holds, verdict.witnesses
    assert verdict.details["shortened"] >= verdict.details["x_disjoint"]


def test_surgery_sweep_flags_unshortened_detours(hexagon_a2: MultiarcGraph, mocker) -> None:
    x = Chord(0, 2)
    detour = Path((mu((0, 2), (2, 4)), mu((2, 4), (0, 4)), mu((0, 4), (0, 2))))
    same_length = Path((mu((0, 2), (2, 4)), mu((0, 2), (2, 5)), mu((0, 2), (0, 4))))
    mocker.patch.object(combing, "random_paths_through", return_value=[(detour, x)])
    mocker.patch.object(
        combing, "surgery", return_value=combing.SurgeryResult(path=same_length)
    )
    verdict = combing.surgery_sweep(hexagon_a2, count=1)
    assert not verdict.holds
    assert verdict.details["x_disjoint"] == 1
    assert verdict.witnesses[0]["error"] == "x-disjoint detour not shortened"

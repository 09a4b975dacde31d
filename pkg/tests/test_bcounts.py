"""Tests for B-graph counts, connectivity and twist orbits."""

from __future__ import annotations

import pytest
from conftest import mu

from arcgraphs.services import bcounts
from arcgraphs.services.arcs import NormalArc
from arcgraphs.services.errors import InvalidInput
from arcgraphs.services.polygon import PolygonSurface
from arcgraphs.services.surface import SurfaceSpec
from arcgraphs.services.triangulated import TriangulatedSurface


@pytest.fixture(scope="module")
def sphere4() -> TriangulatedSurface:
    return TriangulatedSurface(SurfaceSpec.punctured_sphere(4))


def test_max_disjoint_separating_respects_bound(sphere4: TriangulatedSurface) -> None:
    report = bcounts.max_disjoint_separating(sphere4, arc_bound=2)
    assert report.bound == 3
    assert report.relation == "at_most"
    assert report.within_bound
    assert len(report.witnesses) == report.observed


@pytest.mark.parametrize(("p", "observed"), [(4, 3), (5, 5)])
def test_max_disjoint_separating_reaches_the_bound(p: int, observed: int) -> None:
    sphere = TriangulatedSurface(SurfaceSpec.punctured_sphere(p))
    report = bcounts.max_disjoint_separating(sphere, arc_bound=4)
    assert report.bound == 2 * p - 5
    assert report.observed == observed
    assert report.within_bound
    arcs = [sphere.arc_from_json(a) for a in report.witnesses]
    assert all(sphere.is_separating(a) for a in arcs)
    assert all(sphere.disjoint(a, b) for a in arcs for b in arcs if a != b)


def test_max_disjoint_separating_needs_a_punctured_sphere(hexagon: PolygonSurface) -> None:
    with pytest.raises(InvalidInput):
        bcounts.max_disjoint_separating(hexagon)
    with pytest.raises(InvalidInput):
        bcounts.max_disjoint_separating(TriangulatedSurface(SurfaceSpec.punctured_sphere(3)))


def test_nonsep_neighbors_of_a_decagon_diameter() -> None:
    report = bcounts.nonsep_neighbors(PolygonSurface(10), mu((0, 5)))
    assert report.observed == 8
    assert report.bound == 1
    assert report.relation == "at_least"
    assert report.within_bound


@pytest.mark.parametrize("p", [4, 5])
def test_nonsep_neighbors_of_a_separating_arc(p: int) -> None:
    sphere = TriangulatedSurface(SurfaceSpec.punctured_sphere(p))
    pool = sphere.enumerate_arcs(4)
    arc = next(a for a in pool if not sphere.is_nonseparating_or_ear(a))
    report = bcounts.nonsep_neighbors(sphere, sphere.multiarc([arc]), arc_bound=4)
    assert report.bound == p - 1
    assert report.relation == "at_least"
    assert report.within_bound, report.observed


def test_nonsep_neighbors_rejects_b_vertices(hexagon: PolygonSurface) -> None:
    with pytest.raises(InvalidInput):
        bcounts.nonsep_neighbors(hexagon, mu((0, 2)))


def test_b_connectivity_is_reported_below_the_threshold(hexagon: PolygonSurface) -> None:
    verdict = bcounts.b_connectivity(hexagon)
    assert verdict.holds
    assert verdict.details["asserted"] is False
    assert verdict.details["vertices"] == 6
    assert verdict.details["scope"] == "complete"


def test_b_connectivity_of_a_decagon() -> None:
    verdict = bcounts.b_connectivity(PolygonSurface(10))
    assert verdict.details["asserted"] is True
    assert verdict.holds
    assert verdict.details["components"] == 1


def test_b_connectivity_in_a_ball(hexagon: PolygonSurface) -> None:
    verdict = bcounts.b_connectivity(hexagon, 1, "ball", center=mu((0, 2)), radius=1)
    assert verdict.details["scope"] == "ball"
    assert verdict.details["asserted"] is False


# ── Twist orbits ─────────────────────────────────────────────────────────────


def test_twist_growth_needs_normal_coordinates(hexagon: PolygonSurface) -> None:
    with pytest.raises(InvalidInput):
        bcounts.twist_growth(hexagon, NormalArc((1, 0, 0)))


def test_twist_growth_counts_distinct_images(sphere4: TriangulatedSurface, mocker) -> None:
    arc = sphere4.reference_arcs[0]
    images = [arc, NormalArc((1, 0, 0, 0, 0, 0)), NormalArc((2, 1, 0, 0, 0, 0))]
    g = mocker.Mock()
    g.powers.return_value = iter(images)
    verdict = bcounts.twist_growth(sphere4, arc, g=g, times=2)
    g.powers.assert_called_once_with(arc, 2)
    assert verdict.holds
    assert verdict.details["distinct"] == [1, 2, 3]
    assert verdict.details["weights"] == [-1, 1, 3]


def test_twist_growth_flags_a_periodic_orbit(sphere4: TriangulatedSurface, mocker) -> None:
    arc = sphere4.reference_arcs[0]
    g = mocker.Mock()
    g.powers.return_value = iter([arc, arc])
    verdict = bcounts.twist_growth(sphere4, arc, g=g, times=1)
    assert not verdict.holds
    assert verdict.details["distinct"] == [1, 1]

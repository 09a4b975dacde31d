"""Tests for surface signatures, complexity and cutting."""

from __future__ import annotations

import pytest
from conftest import mu
from pydantic import ValidationError

from arcgraphs.services.errors import InvalidInput
from arcgraphs.services.polygon import PolygonSurface
from arcgraphs.services.surface import (
    Backend,
    SurfaceSpec,
    complexity,
    cut,
    is_exceptional,
    open_surface,
)
from arcgraphs.services.triangulated import TriangulatedSurface


@pytest.mark.parametrize(
    ("spec", "expected"),
    [
        (SurfaceSpec.polygon(6), 3),
        (SurfaceSpec(genus=1, boundary_points=[1]), 4),
        (SurfaceSpec.punctured_sphere(5), 9),
    ],
)
def test_complexity(spec: SurfaceSpec, expected: int) -> None:
    assert complexity(spec) == expected
    assert spec.omega == expected


@pytest.mark.parametrize(
    ("spec", "expected"),
    [
        (SurfaceSpec.polygon(12), True),
        (SurfaceSpec(genus=2, boundary_points=[1]), False),
        (SurfaceSpec.punctured_sphere(4), False),
        (SurfaceSpec.punctured_sphere(3), True),
    ],
)
def test_is_exceptional(spec: SurfaceSpec, expected: bool) -> None:
    assert is_exceptional(spec) is expected


def test_spec_rejects_empty_surface() -> None:
    with pytest.raises(ValidationError):
        SurfaceSpec(genus=1)


def test_spec_rejects_empty_boundary_curve() -> None:
    with pytest.raises(ValidationError):
        SurfaceSpec(boundary_points=[0], interior_points=2)


def test_canonical_sorts_boundary_counts() -> None:
    spec = SurfaceSpec(boundary_points=[3, 1], interior_points=1)
    assert spec.canonical().boundary_points == (1, 3)
    assert spec.describe() == "S(g=0, b=2, p=1, q=[3, 1])"
    assert SurfaceSpec.polygon(6).describe() == "hexagon"


def test_open_surface_chooses_backend() -> None:
    assert isinstance(open_surface(SurfaceSpec.polygon(6)), PolygonSurface)
    assert isinstance(
        open_surface(SurfaceSpec.polygon(6), Backend.TRIANGULATED), TriangulatedSurface
    )
    assert isinstance(open_surface(SurfaceSpec.punctured_sphere(4)), TriangulatedSurface)


def test_polygon_backend_rejects_other_surfaces() -> None:
    with pytest.raises(InvalidInput):
        open_surface(SurfaceSpec.punctured_sphere(4), "polygon")


# ── Cutting ──────────────────────────────────────────────────────────────────


def test_cut_along_diameter(hexagon: PolygonSurface) -> None:
    result = cut(hexagon, mu((0, 3)))
    assert result.components == (SurfaceSpec.polygon(4), SurfaceSpec.polygon(4))
    assert result.embeddings == ((0, 1, 2, 3), (0, 3, 4, 5))
    assert [c.omega for c in result.components] == [1, 1]


def test_cut_along_ear(hexagon: PolygonSurface) -> None:
    result = cut(hexagon, mu((0, 2)))
    assert result.components == (SurfaceSpec.polygon(3), SurfaceSpec.polygon(5))
    assert result.has_triangle()
    assert result.positive == (SurfaceSpec.polygon(5),)


def test_cut_along_two_ears(hexagon: PolygonSurface) -> None:
    result = cut(hexagon, mu((0, 2), (2, 4)))
    assert sorted(c.q for c in result.components) == [3, 3, 4]
    assert result.total_complexity == hexagon.omega - 2


def test_cut_rejects_crossing_chords(hexagon: PolygonSurface) -> None:
    with pytest.raises(InvalidInput):
        hexagon.cut((mu((0, 2)).arcs[0], mu((1, 3)).arcs[0]))

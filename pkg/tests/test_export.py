"""Tests for graph documents and DOT rendering."""

from __future__ import annotations

import json

import pytest
from conftest import mu

from arcgraphs.services import export
from arcgraphs.services.errors import InvalidInput
from arcgraphs.services.multiarc_graph import MultiarcGraph, build
from arcgraphs.services.polygon import PolygonSurface
from arcgraphs.services.surface import SurfaceSpec
from arcgraphs.services.triangulated import TriangulatedSurface


def test_document_fields(hexagon_a2: MultiarcGraph) -> None:
    doc = export.to_document(hexagon_a2)
    assert doc.k == 2
    assert doc.complete
    assert doc.backend == "polygon"
    assert len(doc.vertices) == len(doc.labels) == 21
    assert doc.vertices[0] == [[0, 2], [0, 3]]
    assert doc.labels[0] == "0-2|0-3"
    assert doc.center is None


def test_document_reloads(hexagon_a2: MultiarcGraph) -> None:
    text = export.dumps(export.to_document(hexagon_a2))
    graph = export.from_document(export.loads(text))
    assert graph.vertices == hexagon_a2.vertices
    assert graph.edges == hexagon_a2.edges
    assert graph.complete


def test_ball_document_keeps_its_center(hexagon: PolygonSurface) -> None:
    ball = build(hexagon, 1, "ball", center=mu((0, 2)), radius=1)
    doc = export.to_document(ball)
    assert (doc.complete, doc.center, doc.radius) == (False, [[0, 2]], 1)
    again = export.from_document(doc, hexagon)
    assert again.completeness.center == mu((0, 2))


def test_triangulated_document() -> None:
    quad = TriangulatedSurface(SurfaceSpec.polygon(4))
    graph = build(quad, 1, arc_bound=2)
    doc = export.to_document(graph)
    assert doc.vertices == [[{"coords": [-1]}], [{"coords": [1]}]]
    assert export.from_document(doc).edges == ((0, 1),)


def test_dumps_is_stable(hexagon_a1: MultiarcGraph) -> None:
    text = export.dumps(export.to_document(hexagon_a1))
    assert text.endswith("}\n")
    assert list(json.loads(text)) == sorted(json.loads(text))
    assert export.dumps({"b": 1, "a": 2}) == '{\n  "a": 2,\n  "b": 1\n}\n'


def test_loads_rejects_garbage() -> None:
    with pytest.raises(InvalidInput):
        export.loads("not json")
    with pytest.raises(InvalidInput):
        export.loads('{"k": 1}')


def test_from_document_rejects_mismatches(
    hexagon_a1: MultiarcGraph, pentagon: PolygonSurface
) -> None:
    doc = export.to_document(hexagon_a1)
    with pytest.raises(InvalidInput):
        export.from_document(doc, pentagon)
    with pytest.raises(InvalidInput):
        export.from_document(doc.model_copy(update={"edges": [(3, 1)]}))
    with pytest.raises(InvalidInput):
        export.from_document(doc.model_copy(update={"k": 2}))


def test_render_dot(hexagon_a1: MultiarcGraph) -> None:
    dot = export.render_dot(hexagon_a1)
    assert dot.startswith("graph A {")
    assert 'label="A^[1](hexagon)";' in dot
    assert '  0 [label="0-2"];' in dot
    assert dot.count(" -- ") == 21
    assert "comment" not in dot


def test_render_dot_marks_balls(hexagon: PolygonSurface) -> None:
    ball = build(hexagon, 1, "ball", center=mu((0, 2)), radius=1)
    dot = export.render_dot(ball, name="B")
    assert dot.startswith("graph B {")
    assert 'comment="ball: partial graph";' in dot

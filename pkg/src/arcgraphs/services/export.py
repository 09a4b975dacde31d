"""
export.py – JSON documents and DOT rendering for multiarc graphs.
"""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Any

from jinja2 import Environment, FileSystemLoader, select_autoescape
from pydantic import BaseModel, Field

from arcgraphs.services.errors import InvalidInput
from arcgraphs.services.multiarc_graph import Completeness, MultiarcGraph
from arcgraphs.services.surface import Backend, Surface, SurfaceSpec, open_surface

logger = logging.getLogger(__name__)

# Templates directory sits next to this package
_TEMPLATES_DIR = Path(__file__).parent.parent / "templates"


class GraphDocument(BaseModel):
    """Serialized form of a ``MultiarcGraph``; vertices are lists of arc payloads."""

    surface: SurfaceSpec
    backend: Backend
    k: int
    complete: bool
    convention: str
    center: list[Any] | None = None
    radius: int | None = None
    arc_bound: int | None = None
    vertices: list[list[Any]] = Field(default_factory=list)
    labels: list[str] = Field(default_factory=list)
    edges: list[tuple[int, int]] = Field(default_factory=list)


def to_document(graph: MultiarcGraph) -> GraphDocument:
    surface = graph.surface
    c = graph.completeness
    return GraphDocument(
        surface=surface.spec,
        backend=surface.backend,
        k=graph.k,
        complete=c.complete,
        convention=graph.convention,
        center=[surface.arc_to_json(a) for a in c.center] if c.center is not None else None,
        radius=c.radius,
        arc_bound=c.arc_bound,
        vertices=[[surface.arc_to_json(a) for a in mu] for mu in graph.vertices],
        labels=[graph.label(i) for i in range(len(graph))],
        edges=list(graph.edges),
    )


def from_document(doc: GraphDocument, surface: Surface | None = None) -> MultiarcGraph:
    """Rebuild a graph; arcs are re-validated against ``surface``."""
    surface = surface or open_surface(doc.surface, doc.backend)
    if surface.spec != doc.surface:
        raise InvalidInput(
            f"document is for {doc.surface.describe()}, not {surface.spec.describe()}"
        )
    vertices = tuple(surface.multiarc_from_json(v) for v in doc.vertices)
    if any(len(mu) != doc.k for mu in vertices):
        raise InvalidInput(f"document holds a vertex that is not a {doc.k}-multiarc")
    n = len(vertices)
    if any(not (0 <= i < j < n) for i, j in doc.edges):
        raise InvalidInput("document edges must be ascending index pairs")
    center = surface.multiarc_from_json(doc.center) if doc.center is not None else None
    return MultiarcGraph(
        surface=surface,
        k=doc.k,
        vertices=vertices,
        edges=tuple(sorted((i, j) for i, j in doc.edges)),
        completeness=Completeness(doc.complete, center, doc.radius, doc.arc_bound),
        convention=doc.convention,
    )


def dumps(payload: BaseModel | dict[str, Any]) -> str:
    """Stable JSON: sorted keys, two-space indent, trailing newline."""
    data = payload.model_dump(mode="json") if isinstance(payload, BaseModel) else payload
    return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def loads(text: str) -> GraphDocument:
    try:
        return GraphDocument.model_validate_json(text)
    except ValueError as exc:
        raise InvalidInput(f"not a graph document: {exc}") from exc


def render_dot(graph: MultiarcGraph, name: str = "A") -> str:
    env = Environment(
        loader=FileSystemLoader(str(_TEMPLATES_DIR)),
        autoescape=select_autoescape([]),
        trim_blocks=True,
        lstrip_blocks=True,
    )
    env.filters["quote"] = _quote
    template = env.get_template("graph.dot.j2")
    text = template.render(
        name=name,
        title=f"A^[{graph.k}]({graph.surface.spec.describe()})",
        complete=graph.complete,
        labels=[graph.label(i) for i in range(len(graph))],
        edges=graph.edges,
    )
    logger.debug("Rendered DOT for %r (%d chars)", graph, len(text))
    return text


def _quote(value: str) -> str:
    return '"' + str(value).replace("\\", "\\\\").replace('"', '\\"') + '"'

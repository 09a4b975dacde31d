"""
graph_builder_node – Builds A^[k](S) for the commands that need it.

Without ``--radius`` the whole graph is built (certified arc sets only);
with it, a ball around ``--mu`` or around a default centre.
"""

from __future__ import annotations

import logging

from arcgraphs.services.arcs import EMPTY, Multiarc
from arcgraphs.services.combing import complete_to_triangulation
from arcgraphs.services.errors import ArcGraphError, Falsification
from arcgraphs.services.multiarc_graph import BuildMode, build
from arcgraphs.services.surface import Surface
from arcgraphs.state import RunConfig, RunState

logger = logging.getLogger(__name__)


def default_center(surface: Surface, k: int) -> Multiarc:
    """The first k arcs of the greedy lexicographic triangulation."""
    return Multiarc.of(complete_to_triangulation(surface, EMPTY).arcs[:k])


def center_of(surface: Surface, config: RunConfig) -> Multiarc | None:
    if not config.ball:
        return None
    if config.mu is not None:
        return surface.multiarc_from_json(config.mu)
    return default_center(surface, config.k)


def graph_builder_node(state: RunState) -> RunState:
    config = state["config"]
    surface = state["surface"]
    try:
        graph = build(
            surface,
            config.k,
            BuildMode.BALL if config.ball else BuildMode.COMPLETE,
            center=center_of(surface, config),
            radius=config.radius,
            arc_bound=config.arc_bound,
        )
    except ArcGraphError as exc:
        logger.error("Build failed: %s", exc)
        code = 1 if isinstance(exc, Falsification) else 2
        return {**state, "exit_code": code, "errors": [f"graph_builder_node: {exc}"]}
    return {**state, "graph": graph}


def after_build(state: RunState) -> str:
    return "report" if "exit_code" in state else "run_command"

"""
surface_loader_node – Opens the requested surface on its backend.

Polygon signatures default to the chord backend; everything else is handled
by normal coordinates. A backend that cannot represent the signature ends
the run with a usage error.
"""

from __future__ import annotations

import logging

from arcgraphs.services.errors import ArcGraphError
from arcgraphs.services.surface import is_exceptional, open_surface
from arcgraphs.state import SURFACE_ONLY, RunState

logger = logging.getLogger(__name__)


def surface_loader_node(state: RunState) -> RunState:
    """Populate ``surface`` from ``config.spec`` and ``config.backend``."""
    config = state["config"]
    try:
        surface = open_surface(config.spec, config.backend)
    except ArcGraphError as exc:
        logger.error("Cannot open %s: %s", config.spec.describe(), exc)
        return {**state, "exit_code": 2, "errors": [f"surface_loader_node: {exc}"]}

    if surface.omega < 1:
        msg = f"{config.spec.describe()} has complexity {surface.omega}; no arcs to study"
        logger.error(msg)
        return {**state, "exit_code": 2, "errors": [f"surface_loader_node: {msg}"]}

    logger.info(
        "Surface %s: ω=%d, backend=%s%s",
        config.spec.describe(),
        surface.omega,
        surface.backend,
        ", exceptional" if is_exceptional(config.spec) else "",
    )
    return {**state, "surface": surface}


def next_step(state: RunState) -> str:
    """Routing function: stop on error, skip the build for surface-only commands."""
    if "exit_code" in state:
        return "report"
    if state["config"].command in SURFACE_ONLY:
        return "run_command"
    return "build_graph"

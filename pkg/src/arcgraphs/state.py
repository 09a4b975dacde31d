"""
LangGraph state schema – shared across all graph nodes.
"""

from __future__ import annotations

from pathlib import Path
from typing import Annotated, Any, Literal

from langgraph.graph.message import add_messages
from pydantic import BaseModel, ConfigDict, Field
from typing_extensions import TypedDict

from arcgraphs.services.multiarc_graph import MultiarcGraph
from arcgraphs.services.surface import Backend, Surface, SurfaceSpec

COMMANDS = (
    "info",
    "build",
    "dist",
    "geodesics",
    "convexity-sweep",
    "comb",
    "surgery",
    "aut",
    "tower",
    "embed-check",
    "permute-sweep",
    "bgraph",
    "counts",
)

# Commands that only need the surface, not a prebuilt graph
SURFACE_ONLY = frozenset({"info", "comb", "bgraph", "counts", "embed-check"})


class RunConfig(BaseModel):
    """Everything one invocation needs; the seed fixes every sampled sequence."""

    model_config = ConfigDict(frozen=True)

    command: Literal[COMMANDS]  # type: ignore[valid-type]
    spec: SurfaceSpec
    backend: Backend | None = None
    k: int = Field(1, ge=1)
    radius: int | None = Field(None, ge=0)
    arc_bound: int | None = Field(None, ge=0)
    seed: int = Field(0, ge=0, lt=2**64)
    out: Path | None = None
    format: Literal["json", "dot"] = "json"
    deterministic: bool = False
    workers: int | None = Field(None, ge=1)
    sample: int | None = Field(None, ge=1)
    all_paths: bool = False

    # Command parameters, still in their JSON form
    u: Any = None
    v: Any = None
    arc: Any = None
    x: Any = None
    head: int | None = None
    path: Any = None
    mu: Any = None

    @property
    def ball(self) -> bool:
        return self.radius is not None


class RunState(TypedDict, total=False):
    """Shared state passed between every node in the arcgraphs run graph."""

    # ── Input ──────────────────────────────────────────────────────────────
    config: RunConfig

    # ── Surface / graph ────────────────────────────────────────────────────
    surface: Surface
    graph: MultiarcGraph

    # ── Command output ─────────────────────────────────────────────────────
    result: dict[str, Any]           # JSON-ready payload
    dot: str                         # DOT text when --format dot
    holds: bool                      # False when an asserted property failed
    exit_code: int                   # 0 ok / 1 falsified / 2 usage or resource error
    output_path: str                 # Where the report went ("-" for stdout)

    # ── Error tracking ─────────────────────────────────────────────────────
    errors: Annotated[list[str], add_messages]  # Non-fatal errors accumulated

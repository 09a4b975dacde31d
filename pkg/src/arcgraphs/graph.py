"""
graph.py – Compiles the arcgraphs run pipeline.

Graph topology:
    START
      └─ load_surface
          ├─ (error) → report
          ├─ (surface-only command) → run_command
          └─ build_graph
                ├─ (error) → report
                └─ run_command
                      └─ report
                            └─ END
"""

from __future__ import annotations

from langgraph.graph import END, START, StateGraph

from arcgraphs.nodes.command_runner import command_runner_node
from arcgraphs.nodes.graph_builder import after_build, graph_builder_node
from arcgraphs.nodes.report_writer import report_writer_node
from arcgraphs.nodes.surface_loader import next_step, surface_loader_node
from arcgraphs.state import RunState


def compile_graph():
    """Build and compile the LangGraph state machine."""
    builder = StateGraph(RunState)

    # Register nodes
    builder.add_node("load_surface", surface_loader_node)
    builder.add_node("build_graph", graph_builder_node)
    builder.add_node("run_command", command_runner_node)
    builder.add_node("report", report_writer_node)

    # Entry point
    builder.add_edge(START, "load_surface")

    builder.add_conditional_edges(
        "load_surface",
        next_step,
        {
            "build_graph": "build_graph",
            "run_command": "run_command",
            "report": "report",
        },
    )
    builder.add_conditional_edges(
        "build_graph",
        after_build,
        {"run_command": "run_command", "report": "report"},
    )

    builder.add_edge("run_command", "report")
    builder.add_edge("report", END)

    return builder.compile()

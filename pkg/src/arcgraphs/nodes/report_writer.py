"""
report_writer_node – Serializes the run outcome and settles the exit code.

JSON reports have sorted keys and carry a ``generated_at`` timestamp unless
the run is deterministic, so identical configurations give identical bytes.
"""

from __future__ import annotations

import logging
import sys
from datetime import UTC, datetime
from typing import Any

from arcgraphs.services.export import dumps
from arcgraphs.state import RunState

logger = logging.getLogger(__name__)


def _messages(errors: list[Any]) -> list[str]:
    # add_messages wraps plain strings in message objects
    return [str(getattr(e, "content", e)) for e in errors]


def build_report(state: RunState, exit_code: int) -> dict[str, Any]:
    config = state["config"]
    report: dict[str, Any] = {
        "command": config.command,
        "config": config.model_dump(mode="json", exclude={"out", "format", "deterministic"}),
        "result": state.get("result"),
        "holds": state.get("holds", exit_code == 0),
        "exit_code": exit_code,
        "errors": _messages(state.get("errors", [])),
    }
    if not config.deterministic:
        report["generated_at"] = datetime.now(UTC).isoformat(timespec="seconds")
    return report


def report_writer_node(state: RunState) -> RunState:
    """Write the JSON (or DOT) report to ``--out`` or stdout."""
    config = state["config"]
    if "exit_code" in state:
        exit_code = state["exit_code"]
    else:
        exit_code = 0 if state.get("holds", True) else 1

    if config.format == "dot" and "dot" in state:
        text = state["dot"]
    else:
        if config.format == "dot":
            logger.warning("%s has no DOT rendering; writing JSON", config.command)
        text = dumps(build_report(state, exit_code))

    if config.out is not None:
        config.out.parent.mkdir(parents=True, exist_ok=True)
        config.out.write_text(text, encoding="utf-8")
        logger.info("Report written: %s", config.out)
        output_path = str(config.out)
    else:
        sys.stdout.write(text)
        sys.stdout.flush()
        output_path = "-"

    return {**state, "exit_code": exit_code, "output_path": output_path}

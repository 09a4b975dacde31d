"""
main.py – Command-line entry point for arcgraphs.

Every subcommand runs the same LangGraph pipeline (load surface → build
graph → run command → report) and writes machine-readable JSON to stdout or
``--out``; logs and the human summary go to stderr.

Usage:
    arcgraphs info --polygon 6
    arcgraphs build --polygon 6 --k 2 --out g.json
    arcgraphs geodesics --polygon 6 --k 2 --u '[[0,2],[2,4]]' --v '[[0,2],[3,5]]' --all
    arcgraphs convexity-sweep --polygon 7 --k 2 --deterministic
    arcgraphs aut --polygon 5 --k 2
    arcgraphs counts --surface s05.json --arc-bound 6

Exit status: 0 when every asserted property held, 1 on a falsification,
2 on usage or resource errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from collections.abc import Sequence
from pathlib import Path
from typing import Any

from pydantic import ValidationError
from rich.console import Console
from rich.logging import RichHandler

from arcgraphs import __version__
from arcgraphs.config import settings
from arcgraphs.graph import compile_graph
from arcgraphs.services.surface import SurfaceSpec
from arcgraphs.state import COMMANDS, RunConfig

console = Console(stderr=True)


def _setup_logging(level: str = "INFO") -> None:
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.INFO),
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(console=console, rich_tracebacks=True)],
        force=True,
    )


def _json_arg(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise argparse.ArgumentTypeError(f"not valid JSON: {exc.msg}") from exc


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    where = common.add_mutually_exclusive_group(required=True)
    where.add_argument("--polygon", type=int, metavar="N", help="Disk with N marked points")
    where.add_argument(
        "--surface", type=Path, metavar="SPEC.json", help="SurfaceSpec JSON document"
    )
    common.add_argument("--backend", choices=["polygon", "triangulated"], default=None)
    common.add_argument("--k", type=int, default=1, help="Multiarc size (default: 1)")
    common.add_argument("--radius", type=int, default=None, help="Build a ball of this radius")
    common.add_argument(
        "--arc-bound",
        type=int,
        default=None,
        help=f"Coordinate-sum bound for arc pools (default: {settings.default_arc_bound})",
    )
    common.add_argument("--seed", type=int, default=0, help="Seed for every sampled sequence")
    common.add_argument("--out", type=Path, default=None, help="Write the report here")
    common.add_argument("--format", choices=["json", "dot"], default="json")
    common.add_argument(
        "--deterministic", action="store_true", help="Omit the generated_at timestamp"
    )
    common.add_argument("--workers", type=int, default=None, help="Worker-pool size for sweeps")
    common.add_argument(
        "--sample",
        type=int,
        default=None,
        help=f"Sample size for sweeps (convexity default: {settings.sample_pairs} pairs)",
    )
    common.add_argument(
        "--log-level",
        default=settings.log_level,
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        help="Logging verbosity",
    )

    params = common.add_argument_group("command parameters (JSON)")
    for name in ("u", "v", "mu", "arc", "x", "path"):
        params.add_argument(f"--{name}", type=_json_arg, default=None)
    params.add_argument("--head", type=int, default=None, help="Head endpoint of --x")
    params.add_argument(
        "--all", dest="all_paths", action="store_true", help="Enumerate every geodesic"
    )
    return common


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="arcgraphs",
        description="arcgraphs – k-multiarc graphs on surfaces with marked points",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    common = _common_options()
    for command in COMMANDS:
        sub.add_parser(command, parents=[common])
    return parser


def _config_from(args: argparse.Namespace) -> RunConfig:
    if args.polygon is not None:
        spec = SurfaceSpec.polygon(args.polygon)
    else:
        spec = SurfaceSpec.model_validate_json(args.surface.read_text(encoding="utf-8"))
    return RunConfig(
        command=args.command,
        spec=spec,
        backend=args.backend,
        k=args.k,
        radius=args.radius,
        arc_bound=args.arc_bound,
        seed=args.seed,
        out=args.out,
        format=args.format,
        deterministic=args.deterministic,
        workers=args.workers,
        sample=args.sample,
        all_paths=args.all_paths,
        u=args.u,
        v=args.v,
        arc=args.arc,
        x=args.x,
        head=args.head,
        path=args.path,
        mu=args.mu,
    )


def run(argv: Sequence[str] | None = None) -> int:
    """Parse ``argv``, run the pipeline once and return the exit status."""
    try:
        args = _build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    _setup_logging(args.log_level)
    log = logging.getLogger(__name__)

    try:
        config = _config_from(args)
    except (ValidationError, OSError) as exc:
        console.print(f"[bold red]✗ Invalid invocation:[/] {exc}")
        return 2

    log.info("Running %s on %s", config.command, config.spec.describe())
    final_state = compile_graph().invoke({"config": config, "errors": []})
    exit_code = int(final_state.get("exit_code", 2))

    if exit_code == 0:
        console.print(f"[bold green]✓[/] {config.command}: all asserted properties held")
    elif exit_code == 1:
        console.print(f"[bold red]✗ {config.command}: a property failed[/]")
    else:
        console.print(f"[bold red]✗ {config.command} stopped[/]")
    for err in final_state.get("errors", []):
        console.print(f"  [red]• {getattr(err, 'content', err)}[/red]")
    return exit_code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

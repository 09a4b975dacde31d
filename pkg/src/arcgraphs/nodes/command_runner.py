"""
command_runner_node – Executes the selected subcommand against the loaded
surface (and graph) and stores a JSON-ready result.

Each handler returns ``(result, holds)``. ``holds`` is False when a property
the command asserts was observed to fail; the report node turns that into
exit code 1.
"""

from __future__ import annotations

import logging
from collections.abc import Callable
from typing import Any

from arcgraphs.config import settings
from arcgraphs.nodes.graph_builder import center_of
from arcgraphs.services import bcounts, combing, embed, export, paths, symmetry
from arcgraphs.services.arcs import Arc, Multiarc, OrientedArc
from arcgraphs.services.errors import ArcGraphError, Falsification, InvalidInput
from arcgraphs.services.multiarc_graph import build, stratum
from arcgraphs.services.polygon import PolygonSurface
from arcgraphs.services.surface import Surface, is_exceptional
from arcgraphs.services.triangulated import TriangulatedSurface
from arcgraphs.services.verdict import CountReport, Verdict
from arcgraphs.state import RunConfig, RunState

logger = logging.getLogger(__name__)

Outcome = tuple[dict[str, Any], bool]


def command_runner_node(state: RunState) -> RunState:
    config = state["config"]
    handler = _HANDLERS[config.command]
    try:
        result, holds = handler(state)
    except Falsification as exc:
        logger.error("%s: %s", config.command, exc)
        return {**state, "exit_code": 1, "holds": False, "errors": [f"{config.command}: {exc}"]}
    except ArcGraphError as exc:
        logger.warning("%s stopped: %s", config.command, exc)
        return {**state, "exit_code": 2, "errors": [f"{config.command}: {exc}"]}
    except Exception as exc:
        logger.exception("%s failed unexpectedly", config.command)
        error = f"{config.command}: {type(exc).__name__}: {exc}"
        return {**state, "exit_code": 2, "errors": [error]}
    if config.format == "dot" and config.command == "build":
        state = {**state, "dot": export.render_dot(state["graph"])}
    return {**state, "result": result, "holds": holds}


# ── Parameter helpers ────────────────────────────────────────────────────────


def _require(config: RunConfig, name: str) -> Any:
    value = getattr(config, name)
    if value is None:
        raise InvalidInput(f"{config.command} needs --{name}")
    return value


def _multiarc(surface: Surface, raw: Any) -> Multiarc:
    if not isinstance(raw, list):
        raise InvalidInput(f"expected a JSON list of arcs, got {raw!r}")
    return surface.multiarc_from_json(raw)


def _oriented(surface: Surface, config: RunConfig) -> OrientedArc:
    x = surface.arc_from_json(_require(config, "x"))
    head = config.head if config.head is not None else surface.endpoints(x)[1]
    return surface.oriented(x, head)


def _labels(surface: Surface, mus: list[Multiarc] | tuple[Multiarc, ...]) -> list[str]:
    return ["|".join(surface.arc_label(a) for a in mu) for mu in mus]


def _verdict(v: Verdict) -> Outcome:
    return v.model_dump(mode="json"), v.holds


# ── Handlers ─────────────────────────────────────────────────────────────────


def _info(state: RunState) -> Outcome:
    config, surface = state["config"], state["surface"]
    pool = surface.enumerate_arcs(config.arc_bound)
    ears = [a for a in pool if surface.is_ear(a)]
    separating = [a for a in pool if surface.is_separating(a)]
    result = {
        "surface": config.spec.model_dump(mode="json"),
        "name": config.spec.describe(),
        "backend": str(surface.backend),
        "omega": surface.omega,
        "exceptional": is_exceptional(config.spec),
        "arcs": len(pool),
        "arcs_complete": pool.complete,
        "arc_bound": pool.bound,
        "ears": len(ears),
        "separating": len(separating),
        "nonseparating": len(pool) - len(separating),
    }
    if isinstance(surface, TriangulatedSurface):
        result["marked_points"] = list(surface.marked_points)
        result["reference"] = [surface.arc_to_json(a) for a in surface.reference_arcs]
    return result, True


def _build(state: RunState) -> Outcome:
    graph = state["graph"]
    return export.to_document(graph).model_dump(mode="json"), True


def _endpoints(state: RunState) -> tuple[Multiarc, Multiarc]:
    config, surface = state["config"], state["surface"]
    u = _multiarc(surface, _require(config, "u"))
    v = _multiarc(surface, _require(config, "v"))
    return u, v


def _dist(state: RunState) -> Outcome:
    config, surface, graph = state["config"], state["surface"], state["graph"]
    u, v = _endpoints(state)
    d = paths.distance(graph, u, v)
    trail = paths.shortest_path(graph, graph.index_of(u), graph.index_of(v))
    constructed = paths.connect(surface, u, v, config.arc_bound)
    result = {
        "u": str(u),
        "v": str(v),
        "distance": d,
        "complete": graph.complete,
        "shortest_path": _labels(surface, [graph.vertices[i] for i in trail or []]),
        "connect_length": constructed.length,
        "connect_path": _labels(surface, constructed.vertices),
    }
    return result, True


def _geodesics(state: RunState) -> Outcome:
    config, surface, graph = state["config"], state["surface"], state["graph"]
    u, v = _endpoints(state)
    if config.all_paths:
        found = paths.all_geodesics(graph, u, v)
    else:
        trail = paths.shortest_path(graph, graph.index_of(u), graph.index_of(v))
        found = [paths.Path(tuple(graph.vertices[i] for i in trail))] if trail else []
    shared = u.intersection(v)
    inside = stratum(graph, shared) if len(shared) else graph
    off = [str(p) for p in found if any(mu not in inside.index for mu in p)]
    result = {
        "u": str(u),
        "v": str(v),
        "distance": found[0].length if found else None,
        "count": len(found),
        "all": config.all_paths,
        "shared": str(shared),
        "geodesics": [_labels(surface, p.vertices) for p in found],
        "leaving_stratum": off,
    }
    return result, not off


def _convexity(state: RunState) -> Outcome:
    config = state["config"]
    sample = settings.sample_pairs if config.sample is None else config.sample
    return _verdict(
        paths.convexity_sweep(
            state["graph"], sample=sample, seed=config.seed, workers=config.workers
        )
    )


def _comb(state: RunState) -> Outcome:
    config, surface = state["config"], state["surface"]
    if config.mu is None:
        return _verdict(combing.comb_sweep(surface, config.k))
    alpha = _multiarc(surface, config.mu)
    x_plus = _oriented(surface, config)
    images = {
        str(a): [str(b) for b in combing.comb(surface, a, x_plus, alpha).images]
        for a in alpha
        if a != x_plus.arc
    }
    collapse = combing.detect_collapse(surface, alpha, x_plus)
    chosen = combing.assignment(surface, alpha, x_plus)
    result = {
        "alpha": str(alpha),
        "x": str(x_plus),
        "images": images,
        "combed": str(combing.comb_multiarc(surface, alpha, x_plus)),
        "collapse": str(collapse) if collapse is not None else None,
        "assignment": {str(a): str(b) for a, b in chosen.pairs},
        "injective": chosen.is_injective,
    }
    return result, chosen.is_injective


def _surgery(state: RunState) -> Outcome:
    config, surface, graph = state["config"], state["surface"], state["graph"]
    if config.path is None:
        return _verdict(combing.surgery_sweep(graph, count=config.sample, seed=config.seed))
    raw = config.path
    if not isinstance(raw, list) or not raw:
        raise InvalidInput("--path must be a non-empty JSON list of multiarcs")
    path = paths.Path(tuple(_multiarc(surface, mu) for mu in raw))
    x: OrientedArc | Arc = (
        _oriented(surface, config) if config.x is not None else _shared_arc(path)
    )
    out = combing.surgery(graph, path, x)
    result = {
        "input": _labels(surface, path.vertices),
        "input_length": path.length,
        "output": _labels(surface, out.path.vertices),
        "output_length": out.length,
        "strategies": list(out.strategies),
    }
    return result, out.length <= path.length


def _shared_arc(path: paths.Path) -> Arc:
    shared = path.start.intersection(path.end)
    if not len(shared):
        raise InvalidInput("the path ends share no arc; pass --x")
    return shared.arcs[0]


def _aut(state: RunState) -> Outcome:
    graph = state["graph"]
    group = symmetry.automorphisms(graph)
    classes = symmetry.mapping_classes(graph.surface)
    faithful = symmetry.faithfulness(graph, classes)
    result = {
        "instance": f"{graph.surface.spec.describe()} k={graph.k}",
        "vertices": len(graph),
        "edges": len(graph.edges),
        "order": group.order,
        "orbit_sizes": list(group.orbit_sizes),
        "base": [graph.label(i) for i in group.base],
        "generators": [g.cycles() for g in group.generators],
        "mapping_classes": faithful.model_dump(mode="json"),
    }
    return result, faithful.holds


def _tower(state: RunState) -> Outcome:
    graph = state["graph"]
    if graph.k < 2:
        raise InvalidInput("the tower check compares A^[k] with A^[k−1]; pass --k ≥ 2")
    lower = build(graph.surface, graph.k - 1)
    return _verdict(symmetry.tower_check(graph, lower, symmetry.mapping_classes(graph.surface)))


def _embed_check(state: RunState) -> Outcome:
    config, surface = state["config"], state["surface"]
    if not isinstance(surface, PolygonSurface):
        raise InvalidInput("embedding checks run on polygons")
    paddings = [_multiarc(surface, config.mu)] if config.mu is not None else None
    verdicts = [embed.embedding_sweep(surface, paddings)]
    arc_graph = build(surface, 1)
    verdicts.append(embed.cliques_to_triangulations(arc_graph))
    for g in symmetry.mapping_classes(surface):
        F = symmetry.from_mapping_class(arc_graph, g)
        verdicts.append(embed.type_preservation(embed.VertexMap(arc_graph, arc_graph, F.perm)))
    holds = all(v.holds for v in verdicts)
    return {"verdicts": [v.model_dump(mode="json") for v in verdicts], "holds": holds}, holds


def _permute(state: RunState) -> Outcome:
    return _verdict(embed.permute_sweep(state["graph"]))


def _bgraph(state: RunState) -> Outcome:
    config, surface = state["config"], state["surface"]
    return _verdict(
        bcounts.b_connectivity(
            surface,
            config.k,
            "ball" if config.ball else "complete",
            center=center_of(surface, config),
            radius=config.radius,
            arc_bound=config.arc_bound,
        )
    )


def _counts(state: RunState) -> Outcome:
    config, surface = state["config"], state["surface"]
    reports: list[CountReport] = []
    spec = surface.spec
    if spec.genus == 0 and spec.b == 0 and spec.p >= 4:
        reports.append(bcounts.max_disjoint_separating(surface, config.arc_bound))

    if config.mu is not None:
        targets = [_multiarc(surface, config.mu)]
    else:
        pool = surface.enumerate_arcs(config.arc_bound)
        limit = config.sample or 10
        targets = [
            Multiarc((a,)) for a in pool if not surface.is_nonseparating_or_ear(a)
        ][:limit]
    reports.extend(bcounts.nonsep_neighbors(surface, mu, config.arc_bound) for mu in targets)

    twist: dict[str, Any] | None = None
    twist_holds = True
    if isinstance(surface, TriangulatedSurface):
        arc = (
            surface.arc_from_json(config.arc)
            if config.arc is not None
            else surface.reference_arcs[0]
        )
        try:
            verdict = bcounts.twist_growth(surface, arc)
            twist, twist_holds = verdict.model_dump(mode="json"), verdict.holds
        except ArcGraphError as exc:
            logger.warning("Twist growth skipped: %s", exc)

    holds = all(r.within_bound for r in reports) and twist_holds
    result = {
        "instance": spec.describe(),
        "reports": [r.model_dump(mode="json") for r in reports],
        "twist_growth": twist,
        "holds": holds,
    }
    return result, holds


_HANDLERS: dict[str, Callable[[RunState], Outcome]] = {
    "info": _info,
    "build": _build,
    "dist": _dist,
    "geodesics": _geodesics,
    "convexity-sweep": _convexity,
    "comb": _comb,
    "surgery": _surgery,
    "aut": _aut,
    "tower": _tower,
    "embed-check": _embed_check,
    "permute-sweep": _permute,
    "bgraph": _bgraph,
    "counts": _counts,
}

"""
bcounts.py – Counting checks around B^[k](S): disjoint separating families on
punctured spheres, B-neighbours of separating-only multiarcs, connectivity of
B^[1], and bounded samples of Dehn-twist-like orbits.
"""

from __future__ import annotations

import logging

import networkx as nx

from arcgraphs.config import settings
from arcgraphs.services.arcs import Multiarc, NormalArc
from arcgraphs.services.errors import InvalidInput, SearchBoundExhausted
from arcgraphs.services.multiarc_graph import (
    BuildMode,
    adjacent,
    b_graph,
    disjointness_graph,
    exchange_neighbors,
    in_b_graph,
)
from arcgraphs.services.surface import Surface
from arcgraphs.services.triangulated import FlipIsometry, TriangulatedSurface
from arcgraphs.services.verdict import CountReport, Verdict

logger = logging.getLogger(__name__)


def _punctured_sphere(surface: Surface) -> int:
    spec = surface.spec
    if spec.genus != 0 or spec.b != 0:
        raise InvalidInput(f"{spec.describe()} is not a punctured sphere")
    if spec.p < 4:
        raise InvalidInput(f"S_0,{spec.p} has no room for the 2p−5 count (p ≥ 4 required)")
    return spec.p


def max_disjoint_separating(surface: Surface, arc_bound: int | None = None) -> CountReport:
    """Largest pairwise-disjoint family of separating arcs among the enumerated ones."""
    p = _punctured_sphere(surface)
    pool = surface.enumerate_arcs(arc_bound)
    separating = [a for a in pool if surface.is_separating(a)]
    if not separating:
        logger.warning("No separating arc within bound %s; raise --arc-bound", pool.bound)
        best: list = []
    else:
        graph = disjointness_graph(surface, separating)
        best = max(nx.find_cliques(graph), key=lambda c: (len(c), sorted(c)))
    report = CountReport(
        instance=f"{surface.spec.describe()} bound={pool.bound}",
        observed=len(best),
        bound=2 * p - 5,
        relation="at_most",
        witnesses=[surface.arc_to_json(a) for a in sorted(best)],
    )
    if not report.within_bound:
        logger.error(
            "Found %d disjoint separating arcs, more than %d", report.observed, report.bound
        )
    return report


def nonsep_neighbors(
    surface: Surface, mu: Multiarc, arc_bound: int | None = None
) -> CountReport:
    """B^[k]-vertices adjacent to a multiarc holding no non-separating arc and no ear."""
    surface.check_multiarc(mu)
    if in_b_graph(surface, mu):
        raise InvalidInput(f"{mu} already holds a non-separating arc or an ear")
    pool = surface.enumerate_arcs(arc_bound)
    found: set[Multiarc] = set()
    for nb in exchange_neighbors(surface, mu, pool):
        if in_b_graph(surface, nb) and adjacent(surface, mu, nb):
            found.add(nb)
    spec = surface.spec
    sphere = spec.genus == 0 and spec.b == 0
    promised = len(mu) * (spec.p - 1) if sphere else 1
    return CountReport(
        instance=f"{spec.describe()} μ={mu} bound={pool.bound}",
        observed=len(found),
        bound=promised,
        relation="at_least",
        witnesses=[[surface.arc_to_json(a) for a in nb] for nb in sorted(found)][:20],
    )


def b_connectivity(
    surface: Surface,
    k: int = 1,
    mode: BuildMode | str = BuildMode.COMPLETE,
    *,
    center: Multiarc | None = None,
    radius: int | None = None,
    arc_bound: int | None = None,
) -> Verdict:
    """Component count of B^[k]; connectivity is asserted only for complete graphs at ω ≥ 7."""
    graph = b_graph(surface, k, mode, center=center, radius=radius, arc_bound=arc_bound)
    components = sorted(nx.connected_components(graph.as_networkx), key=min)
    asserted = graph.complete and k == 1 and surface.omega >= 7
    holds = len(components) == 1 if asserted else True
    if asserted and not holds:
        logger.error("B^[1] of %s has %d components", surface.spec.describe(), len(components))
    return Verdict(
        check="b-connectivity",
        instance=f"{surface.spec.describe()} k={k}",
        holds=holds,
        witnesses=[[graph.label(i) for i in sorted(c)][:5] for c in components[1:6]],
        details={
            "vertices": len(graph),
            "edges": len(graph.edges),
            "components": len(components),
            "asserted": asserted,
            "scope": "complete" if graph.complete else "ball",
        },
    )


# ── Twist orbits ─────────────────────────────────────────────────────────────


def _orbit_grows(g: FlipIsometry, a: NormalArc, times: int) -> bool:
    orbit = list(g.powers(a, times))
    return len(set(orbit)) == len(orbit)


def twist_growth(
    surface: Surface,
    arc: NormalArc,
    g: FlipIsometry | None = None,
    times: int | None = None,
) -> Verdict:
    """Apply an infinite-order class up to ``times`` times; distinct arcs must keep growing."""
    if not isinstance(surface, TriangulatedSurface):
        raise InvalidInput("twist orbits need the triangulated backend")
    surface.check_arc(arc)
    times = settings.max_twist if times is None else times
    if g is None:
        g = next(
            (h for h in surface.mapping_classes() if _orbit_grows(h, arc, times)),
            None,
        )
        if g is None:
            raise SearchBoundExhausted(f"no mapping class near T0 moves {arc} {times} times")
    seen: set[NormalArc] = set()
    distinct: list[int] = []
    weights: list[int] = []
    for image in g.powers(arc, times):
        seen.add(image)
        distinct.append(len(seen))
        weights.append(image.weight)
    growing = all(b > a for a, b in zip(distinct, distinct[1:]))
    logger.debug("Orbit of %s under %s: weights %s", arc, g, weights)
    return Verdict(
        check="twist-growth",
        instance=f"{surface.spec.describe()} arc={arc} g={g}",
        holds=growing,
        details={"distinct": distinct, "weights": weights, "times": times},
    )

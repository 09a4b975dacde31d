"""Shared pytest fixtures."""
from __future__ import annotations

import pytest

from arcgraphs.services.arcs import Chord, Multiarc
from arcgraphs.services.multiarc_graph import MultiarcGraph, build
from arcgraphs.services.polygon import PolygonSurface


@pytest.fixture(autouse=True)
def mock_env(monkeypatch: pytest.MonkeyPatch) -> None:
    """Keep test runs independent of a developer's ARCGRAPHS_* environment."""
    monkeypatch.setenv("ARCGRAPHS_LOG_LEVEL", "WARNING")
    monkeypatch.delenv("ARCGRAPHS_WORKERS", raising=False)


def mu(*pairs: tuple[int, int]) -> Multiarc:
    """Shorthand: ``mu((0, 2), (2, 4))``."""
    return Multiarc.of(Chord(i, j) for i, j in pairs)


@pytest.fixture(scope="session")
def pentagon() -> PolygonSurface:
    return PolygonSurface(5)


@pytest.fixture(scope="session")
def hexagon() -> PolygonSurface:
    return PolygonSurface(6)


@pytest.fixture(scope="session")
def heptagon() -> PolygonSurface:
    return PolygonSurface(7)


@pytest.fixture(scope="session")
def hexagon_a1(hexagon: PolygonSurface) -> MultiarcGraph:
    return build(hexagon, 1)


@pytest.fixture(scope="session")
def hexagon_a2(hexagon: PolygonSurface) -> MultiarcGraph:
    return build(hexagon, 2)


@pytest.fixture(scope="session")
def hexagon_a3(hexagon: PolygonSurface) -> MultiarcGraph:
    return build(hexagon, 3)


@pytest.fixture(scope="session")
def pentagon_a2(pentagon: PolygonSurface) -> MultiarcGraph:
    return build(pentagon, 2)

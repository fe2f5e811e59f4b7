from __future__ import annotations

from pathlib import Path

import pytest

from demoviz import load_chart, parse_interactions, parse_trace

FIXTURES = Path(__file__).resolve().parent.parent / "src" / "demoviz" / "fixtures"
GOLDEN = Path(__file__).resolve().parent / "golden"


def fixture_text(relpath: str) -> str:
    return (FIXTURES / relpath).read_text(encoding="utf-8")


def load_fixture_chart(relpath: str):
    return load_chart(fixture_text(relpath), base_dir=FIXTURES)


def load_fixture_interactions(relpath: str):
    return parse_interactions(fixture_text(relpath))


def load_fixture_trace(relpath: str):
    return parse_trace(fixture_text(relpath))


@pytest.fixture(scope="session")
def seattle_chart():
    return load_fixture_chart("seattle_weather.chart.json")


@pytest.fixture(scope="session")
def horizontal_drag_events():
    return load_fixture_trace("traces/horizontal_drag.trace.json")

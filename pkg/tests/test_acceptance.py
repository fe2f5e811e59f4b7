"""Acceptance suite: one test per acceptance criterion, stated tolerances.

Each criterion prints a single PASS line on success (visible with -v / -s);
a failure surfaces as a normal pytest failure for that criterion.
"""

from __future__ import annotations

import contextlib
import io
import json
import random
import time

import pytest

from demoviz import (
    classify,
    compile_vega,
    compile_vegalite,
    is_expressible_vegalite,
    load_chart,
    suggest,
)
from demoviz.cli import run as cli_run
from demoviz.compiler import VEGA, VEGA_LITE, is_valid, validation_errors
from demoviz.errors import NoValidSelection, NotExpressible
from demoviz.heuristics import geometric_default_projection
from demoviz.jsonio import canonical_json
from demoviz.trace import CLICK_CHUNK_MS, Demonstration, InputEvent, chunk_clicks

from conftest import (
    FIXTURES,
    GOLDEN,
    load_fixture_chart,
    load_fixture_interactions,
    load_fixture_trace,
)
from test_heuristics_oracle import (
    all_cases,
    assert_no_aggregate_projection,
    make_chart,
    make_demo,
    normalize,
    oracle,
    random_chart_and_demo,
)

GALLERY = json.loads((FIXTURES / "gallery/manifest.json").read_text())


def ok(name: str) -> None:
    print(f"ACCEPTANCE PASS: {name}")


@pytest.fixture(scope="module", autouse=True)
def warm_schema_validators():
    # Schema loading is a fixed startup cost, not per-criterion runtime.
    is_valid({"$schema": ""}, VEGA)
    is_valid({"$schema": ""}, VEGA_LITE)


def test_criterion_walkthrough_golden():
    """Fig 2: drag -> interval{x} default; color+filter compile matches golden."""
    t0 = time.perf_counter()

    chart = load_fixture_chart("seattle_weather.chart.json")
    demo = classify(load_fixture_trace("traces/horizontal_drag.trace.json"))[-1]
    suggestions = suggest(chart, demo)

    default = suggestions.selections[suggestions.default_selection]
    assert default.kind == "interval" and default.projection == ("x",)

    apps = suggestions.applications
    conditional = [a for a in apps if a.kind == "conditional_encoding"]
    assert any(a.channel == "color" and a.target == "scatter_points"
               for a in conditional), "color candidate missing"
    assert any(a.channel == "opacity" and a.target == "scatter_points"
               for a in conditional), "opacity candidate missing"
    assert any(a.kind == "filter" and a.target == "hist" for a in apps), \
        "cross-view filter candidate missing"
    assert any(a.kind == "conditional_encoding" and a.target == "hist_bars"
               for a in apps), "multiview link candidate missing"

    # Accept color + filter(histogram) and compile to Vega-Lite.
    accepted = load_fixture_interactions("seattle_brush.interactions.json")
    compiled = compile_vegalite(chart, accepted)
    assert is_valid(compiled.document, VEGA_LITE), \
        validation_errors(compiled.document, VEGA_LITE)
    golden = (GOLDEN / "seattle_brush.vl.json").read_text(encoding="utf-8")
    assert compiled.text == golden, "compiled document diverges from golden file"

    elapsed = time.perf_counter() - t0
    assert elapsed < 1.0, f"walkthrough took {elapsed:.3f}s (budget 1s)"
    ok(f"walkthrough golden (Fig 2) in {elapsed * 1000:.0f} ms")


def test_criterion_brush_label_expressibility():
    """Fig 3: Vega-Lite refuses with SignalBinding; Vega has exactly 4 signals."""
    chart = load_fixture_chart("seattle_scatter_brushlabel.chart.json")
    inter = load_fixture_interactions("brush_label.interactions.json")

    report = is_expressible_vegalite(inter, chart)
    assert report and all(e["code"] == "SignalBinding" for e in report)
    with pytest.raises(NotExpressible) as exc:
        compile_vegalite(chart, inter)
    assert {e["code"] for e in exc.value.report} == {"SignalBinding"}

    compiled = compile_vega(chart, inter)
    assert is_valid(compiled.document, VEGA)
    names = {s["name"] for s in compiled.document["signals"]}
    assert names == {"brush_x_start", "brush_x_end",
                     "brush_date_start", "brush_date_end"}  # exact set equality
    ok("brush-label expressibility boundary (Fig 3)")


def test_criterion_heuristic_oracle_equivalence():
    """Exhaustive profile cross-product vs. the brute-force rule table."""
    t0 = time.perf_counter()
    cases = list(all_cases())
    assert len(cases) == 1050
    agree = 0
    for mark, xs, ys, shared, event in cases:
        chart = make_chart(mark, xs, ys, shared)
        demo = make_demo(event)
        expected = oracle(mark, xs, ys, shared, event)
        if expected is None:
            with pytest.raises(NoValidSelection):
                suggest(chart, demo)
            agree += 1
            continue
        got = normalize(suggest(chart, demo))
        assert got == expected, (mark, xs, ys, shared, event)
        agree += 1
    elapsed = time.perf_counter() - t0
    assert agree == len(cases)  # 100% agreement
    assert elapsed < 10.0, f"oracle sweep took {elapsed:.2f}s (budget 10s)"
    ok(f"heuristic-oracle equivalence over {agree} cases in {elapsed:.2f} s")


def test_criterion_threshold_boundaries():
    """30/60 degree snaps (inclusive) and the 800 ms chunk boundary. Exact."""
    chart = load_fixture_chart("seattle_scatter.chart.json")

    def default_for(angle: float):
        events = (InputEvent(kind="pointerdown", x=0, y=0, t=0, view_id="scatter"),
                  InputEvent(kind="pointerup", x=50, y=50, t=100, view_id="scatter"))
        demo = Demonstration(kind="drag", view_id="scatter", events=events,
                             start=(0, 0), end=(50, 50), trajectory_angle=angle)
        out = suggest(chart, demo)
        return out.selections[out.default_selection].projection

    assert default_for(29.9) == ("x",)
    assert default_for(30.0) == ("x",)
    assert default_for(30.1) == ("x", "y")
    assert default_for(59.9) == ("x", "y")
    assert default_for(60.0) == ("y",)
    assert default_for(60.1) == ("y",)
    # The pure rule agrees at the exact boundary values.
    assert geometric_default_projection(30.0) == ("x",)
    assert geometric_default_projection(60.0) == ("y",)

    def clicks(*times):
        return [InputEvent(kind="click", x=0, y=0, t=t, view_id="v")
                for t in times]

    assert CLICK_CHUNK_MS == 800.0
    assert len(chunk_clicks(clicks(0, 799))) == 1
    assert len(chunk_clicks(clicks(0, 800))) == 2
    ok("threshold boundaries (30/60 degrees, 799/800 ms)")


def test_criterion_aggregate_axis_soundness():
    """1,000 random charts: no suggested brush touches an aggregate axis."""
    rng = random.Random(424242)
    violations = 0
    suggested = 0
    for _ in range(1000):
        chart, demo = random_chart_and_demo(rng)
        try:
            out = suggest(chart, demo)
        except NoValidSelection:
            continue
        suggested += 1
        assert_no_aggregate_projection(chart, out)
    assert violations == 0
    assert suggested > 400, "generator degenerated; too few suggestion sets"
    ok(f"aggregate-axis soundness over 1000 charts ({suggested} suggestion sets)")


def test_criterion_gallery_coverage():
    """Every gallery fixture compiles to schema-valid Vega; one-rule index chart."""

    def count_rules(marks) -> int:
        n = 0
        for m in marks:
            if m.get("type") == "rule":
                n += 1
            n += count_rules(m.get("marks", []))
        return n

    names = []
    for entry in GALLERY:
        chart = load_fixture_chart(entry["chart"])
        inter = load_fixture_interactions(entry["interactions"])
        compiled = compile_vega(chart, inter)
        assert is_valid(compiled.document, VEGA), entry["name"]
        if entry["name"] == "index_chart":
            assert count_rules(compiled.document["marks"]) == 1
        names.append(entry["name"])
    expected = {"point_select", "brush_select", "pan_zoom", "index_chart",
                "tooltip", "overview_detail", "widget_filter", "brushing_linking"}
    assert set(names) == expected
    ok(f"gallery coverage ({len(names)} fixtures, index chart has one rule)")


def _cli_capture(argv: list[str]) -> tuple[int, bytes]:
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf), contextlib.redirect_stderr(io.StringIO()):
        code = cli_run(argv)
    return code, buf.getvalue().encode("utf-8")


def _full_suite_outputs() -> list[bytes]:
    from fastapi.testclient import TestClient

    from demoviz.service import create_app

    outputs: list[bytes] = []
    chart = str(FIXTURES / "seattle_weather.chart.json")
    outputs.append(_cli_capture(["suggest", "--chart", chart, "--trace",
                                 str(FIXTURES / "traces/horizontal_drag.trace.json")])[1])
    outputs.append(_cli_capture(["suggest", "--chart", chart, "--trace",
                                 str(FIXTURES / "traces/bar_double_click.trace.json")])[1])
    outputs.append(_cli_capture(["widgets", "--chart", chart, "--field", "weather"])[1])
    outputs.append(_cli_capture(["validate", "--chart", chart, "--interactions",
                                 str(FIXTURES / "seattle_brush.interactions.json")])[1])
    outputs.append(_cli_capture(["compile", "--chart", chart, "--interactions",
                                 str(FIXTURES / "seattle_brush.interactions.json"),
                                 "--target", "vega-lite"])[1])
    for entry in GALLERY:
        outputs.append(_cli_capture([
            "compile",
            "--chart", str(FIXTURES / entry["chart"]),
            "--interactions", str(FIXTURES / entry["interactions"]),
            "--target", "vega"])[1])

    client = TestClient(create_app())
    chart_doc = json.loads((FIXTURES / "seattle_weather.chart.json").read_text())
    trace_doc = json.loads(
        (FIXTURES / "traces/horizontal_drag.trace.json").read_text())
    inter_doc = json.loads(
        (FIXTURES / "seattle_brush.interactions.json").read_text())
    outputs.append(client.post(
        "/api/suggest", json={"chart": chart_doc, "trace": trace_doc}).content)
    outputs.append(client.post(
        "/api/compile", json={"chart": chart_doc, "interactions": inter_doc,
                              "target": "vega"}).content)
    outputs.append(client.post(
        "/api/widgets", json={"chart": chart_doc, "field": "temp_max"}).content)
    return outputs


def test_criterion_determinism():
    """CLI and service outputs are byte-identical across 3 runs."""
    runs = [_full_suite_outputs() for _ in range(3)]
    assert runs[0] == runs[1] == runs[2]
    assert all(out for out in runs[0]), "an invocation produced no output"
    ok(f"determinism across 3 runs x {len(runs[0])} invocations")

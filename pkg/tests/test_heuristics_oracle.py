"""Rule-table oracle for the suggestion system.

The oracle below is an independent, brute-force transcription of the
suggestion rules as literal lookups: selection candidates from (mark type,
axis states, event), applications from (mark type, continuity, shared
data). It never calls into the heuristics module; the equivalence test
then demands exact agreement on membership, ordering, and default over the
whole profile cross-product.
"""

from __future__ import annotations

import random

import pytest

from demoviz import load_chart, suggest
from demoviz.errors import NoValidSelection
from demoviz.trace import Demonstration, InputEvent

MARKS = ("symbol", "rect", "line", "area", "text", "rule", "group")
AXIS_STATES = ("none", "disc", "disc_agg", "cont", "cont_agg")
EVENTS = ("click", "drag", "hover")

X_FIELD = {"disc": "cat", "disc_agg": "cat", "cont": "num_x", "cont_agg": "num_x"}
Y_FIELD = {"disc": "cat2", "disc_agg": "cat2", "cont": "num_y", "cont_agg": "num_y"}


def make_chart(mark: str, xs: str, ys: str, shared: bool):
    rows = [
        {"cat": "a", "cat2": "p", "num_x": 1, "num_y": 10},
        {"cat": "b", "cat2": "q", "num_x": 2, "num_y": 20},
        {"cat": "a", "cat2": "q", "num_x": 3, "num_y": 30},
    ]
    scales = []
    encodings = {}
    if xs != "none":
        scale = {"id": "sx", "channel": "x", "kind": "discrete" if xs.startswith("disc") else "continuous",
                 "field": X_FIELD[xs], "range": [0, 200]}
        if xs.endswith("_agg"):
            scale["aggregate"] = "count" if xs == "disc_agg" else "mean"
        scales.append(scale)
        encodings["x"] = {"scale": "sx", "field": X_FIELD[xs]}
    if ys != "none":
        scale = {"id": "sy", "channel": "y", "kind": "discrete" if ys.startswith("disc") else "continuous",
                 "field": Y_FIELD[ys], "range": [200, 0]}
        if ys.endswith("_agg"):
            scale["aggregate"] = "count" if ys == "disc_agg" else "mean"
        scales.append(scale)
        encodings["y"] = {"scale": "sy", "field": Y_FIELD[ys]}
    views = [{
        "id": "v", "width": 200, "height": 200, "scales": scales,
        "marks": [{"id": "m", "type": mark, "dataset": "d", "encodings": encodings}],
    }]
    if shared:
        views.append({
            "id": "v2", "width": 200, "height": 200,
            "scales": [
                {"id": "s2x", "channel": "x", "kind": "continuous",
                 "field": "num_x", "range": [0, 200]},
                {"id": "s2y", "channel": "y", "kind": "continuous",
                 "field": "num_y", "range": [200, 0]},
            ],
            "marks": [{"id": "m2", "type": "symbol", "dataset": "d", "encodings": {
                "x": {"scale": "s2x", "field": "num_x"},
                "y": {"scale": "s2y", "field": "num_y"},
            }}],
        })
    return load_chart({"version": 1,
                       "datasets": [{"id": "d", "fields": [], "rows": rows}],
                       "views": views})


def make_demo(event: str) -> Demonstration:
    if event == "drag":
        events = (InputEvent(kind="pointerdown", x=0, y=0, t=0, view_id="v"),
                  InputEvent(kind="pointerup", x=100, y=100, t=100, view_id="v"))
        return Demonstration(kind="drag", view_id="v", events=events,
                             start=(0, 0), end=(100, 100), trajectory_angle=45.0)
    if event == "click":
        events = (InputEvent(kind="click", x=10, y=10, t=0, view_id="v"),)
        return Demonstration(kind="click_chunk", view_id="v", events=events,
                             click_count=1)
    events = (InputEvent(kind="hoverenter", x=10, y=10, t=0, view_id="v"),)
    return Demonstration(kind="hover", view_id="v", events=events)


# ---------------------------------------------------------------------------
# The oracle: literal rule tables, no shared code with the implementation.


def oracle(mark: str, xs: str, ys: str, shared: bool, event: str):
    """Expected (selections, applications) or None for no-valid-selection."""
    if event == "drag":
        sels = []
        if mark in ("rect", "symbol", "text", "rule", "group") \
                and xs == "cont" and ys == "cont":
            sels.append(("interval", ("x", "y"), None))
        if xs in ("disc", "cont"):
            sels.append(("interval", ("x",), None))
        if ys in ("disc", "cont") and mark not in ("area", "line"):
            sels.append(("interval", ("y",), None))
        if not sels:
            return None
        default = ("interval", ("x", "y"), None)
        if default not in sels:
            default = sels[0]
        ordered = [default] + [s for s in sels if s != default]
    else:
        fields = []
        if xs == "disc":
            fields.append("cat")
        elif xs == "cont":
            fields.append("num_x")
        if ys == "disc":
            fields.append("cat2")
        elif ys == "cont":
            fields.append("num_y")
        ordered = [("point", (), "single"), ("point", (), "multi")]
        ordered += [("point", (f,), "single") for f in fields]

    apps = []
    if mark not in ("area", "line"):
        apps.append(("conditional_encoding", "color", "m", ()))
        apps.append(("conditional_encoding", "opacity", "m", ()))
        if mark == "symbol":
            apps.append(("conditional_encoding", "size", "m", ()))
    cont = tuple(s for s, state in (("sx", xs), ("sy", ys))
                 if state in ("cont", "cont_agg"))
    if cont:
        apps.append(("pan_zoom", None, "v", cont))
    if shared:
        apps.append(("filter", None, "v2", ()))
        apps.append(("conditional_encoding", "color", "m2", ()))
    return ordered, apps


def normalize(suggestions):
    sels = [(s.kind, s.projection, s.cardinality) for s in suggestions.selections]
    apps = [(a.kind, a.channel, a.target, a.scales) for a in suggestions.applications]
    return sels, apps


def all_cases():
    for mark in MARKS:
        for xs in AXIS_STATES:
            for ys in AXIS_STATES:
                for shared in (False, True):
                    for event in EVENTS:
                        yield mark, xs, ys, shared, event


def test_cross_product_size():
    cases = list(all_cases())
    assert len(cases) == 7 * 5 * 5 * 2 * 3 == 1050


@pytest.mark.parametrize("mark", MARKS)
def test_oracle_equivalence(mark):
    for _, xs, ys, shared, event in (c for c in all_cases() if c[0] == mark):
        chart = make_chart(mark, xs, ys, shared)
        demo = make_demo(event)
        expected = oracle(mark, xs, ys, shared, event)
        label = f"mark={mark} x={xs} y={ys} shared={shared} event={event}"
        if expected is None:
            with pytest.raises(NoValidSelection):
                suggest(chart, demo)
            continue
        got = normalize(suggest(chart, demo))
        assert got[0] == expected[0], f"selections diverge for {label}"
        assert got[1] == expected[1], f"applications diverge for {label}"


# ---------------------------------------------------------------------------
# Aggregate-axis soundness over randomly generated charts.


def random_chart_and_demo(rng: random.Random):
    n_views = rng.choice((1, 2))
    views = []
    for i in range(n_views):
        scales = []
        encodings = {}
        for channel, fields in (("x", ("cat", "num_x")), ("y", ("cat2", "num_y"))):
            state = rng.choice(("none", "disc", "cont"))
            if state == "none":
                continue
            field = fields[0] if state == "disc" else fields[1]
            scale = {
                "id": f"s{i}{channel}", "channel": channel,
                "kind": "discrete" if state == "disc" else "continuous",
                "field": field,
                "range": [0, 100] if channel == "x" else [100, 0],
            }
            if rng.random() < 0.4:
                scale["aggregate"] = rng.choice(("count", "sum", "mean", "min", "max"))
            scales.append(scale)
            encodings[channel] = {"scale": scale["id"], "field": field}
        views.append({
            "id": f"v{i}", "width": 100, "height": 100, "scales": scales,
            "marks": [{"id": f"m{i}", "type": rng.choice(MARKS), "dataset": "d",
                       "encodings": encodings}],
        })
    chart = load_chart({
        "version": 1,
        "datasets": [{"id": "d", "fields": [], "rows": [
            {"cat": "a", "cat2": "p", "num_x": 1, "num_y": 2},
            {"cat": "b", "cat2": "q", "num_x": 3, "num_y": 4},
        ]}],
        "views": views,
    })
    events = (InputEvent(kind="pointerdown", x=0, y=0, t=0, view_id="v0"),
              InputEvent(kind="pointerup", x=80, y=20, t=100, view_id="v0"))
    demo = Demonstration(kind="drag", view_id="v0", events=events, start=(0, 0),
                         end=(80, 20), trajectory_angle=rng.uniform(0, 90))
    return chart, demo


def assert_no_aggregate_projection(chart, suggestions) -> None:
    view = chart.view(suggestions.demonstration.view_id)
    for sel in suggestions.selections:
        if sel.kind != "interval":
            continue
        for axis in sel.projection:
            scale = view.scale_for(axis)
            assert scale is not None
            assert not scale.is_aggregate, (
                f"suggested brush over aggregate {axis}-axis: {sel}")


def test_aggregate_axis_soundness_random_charts():
    rng = random.Random(20120)
    for _ in range(300):
        chart, demo = random_chart_and_demo(rng)
        try:
            out = suggest(chart, demo)
        except NoValidSelection:
            continue
        assert_no_aggregate_projection(chart, out)

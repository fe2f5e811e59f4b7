"""Expressibility, lowering, schema validity, and compiler invariants."""

from __future__ import annotations

import json

import pytest

from demoviz import (
    compile_vega,
    compile_vegalite,
    enumerate_signals,
    is_expressible_vegalite,
    load_chart,
    lower_selection,
    parse_interactions,
)
from demoviz.compiler import VEGA, VEGA_LITE, is_valid
from demoviz.errors import CompileError, NotExpressible
from demoviz.interactions import InteractionSet, Selection

from conftest import FIXTURES, load_fixture_chart, load_fixture_interactions

GALLERY = json.loads((FIXTURES / "gallery/manifest.json").read_text())


def gallery_pair(name: str):
    entry = next(e for e in GALLERY if e["name"] == name)
    return (load_fixture_chart(entry["chart"]),
            load_fixture_interactions(entry["interactions"]))


@pytest.fixture(scope="module")
def seattle():
    return load_fixture_chart("seattle_weather.chart.json")


@pytest.fixture(scope="module")
def brush_model():
    return load_fixture_interactions("seattle_brush.interactions.json")


def signal_names(doc: dict) -> list[str]:
    return [s["name"] for s in doc.get("signals", [])]


def iter_marks(marks):
    for m in marks:
        yield m
        yield from iter_marks(m.get("marks", []))


class TestExpressibility:
    def test_fig2_brush_expressible(self, brush_model):
        assert is_expressible_vegalite(brush_model) == []

    def test_signal_binding_blocks(self):
        inter = load_fixture_interactions("brush_label.interactions.json")
        report = is_expressible_vegalite(inter)
        assert {e["code"] for e in report} == {"SignalBinding"}
        assert len(report) == 4  # one entry per blocking binding

    def test_inequality_comparator_blocks(self):
        inter = load_fixture_interactions("gallery/widget_filter.interactions.json")
        report = is_expressible_vegalite(inter)
        assert [e["code"] for e in report] == ["InequalityComparator"]

    def test_equality_widget_passes(self):
        inter = parse_interactions(json.dumps({
            "version": 1,
            "widgets": [{"id": "w", "field": "weather", "widgetKind": "select",
                         "comparator": "==", "applications": [
                             {"id": "wf", "kind": "filter", "target": "hist"}]}],
        }))
        assert is_expressible_vegalite(inter) == []

    def test_monotone_expressibility(self, seattle, brush_model):
        """Empty report implies compile_vegalite succeeds."""
        assert is_expressible_vegalite(brush_model, seattle) == []
        compile_vegalite(seattle, brush_model)  # must not raise

    def test_monotone_expressibility_across_fixtures(self):
        pairs = [(e["chart"], e["interactions"]) for e in GALLERY]
        pairs += [
            ("seattle_weather.chart.json", "seattle_brush.interactions.json"),
            ("seattle_weather.chart.json", "seattle_click.interactions.json"),
            ("seattle_scatter_brushlabel.chart.json", "brush_label.interactions.json"),
        ]
        for chart_file, inter_file in pairs:
            chart = load_fixture_chart(chart_file)
            inter = load_fixture_interactions(inter_file)
            if is_expressible_vegalite(inter, chart) == []:
                doc = compile_vegalite(chart, inter).document
                assert is_valid(doc, VEGA_LITE), (chart_file, inter_file)

    def test_group_marks_block_vegalite(self):
        chart = load_chart({
            "version": 1,
            "datasets": [{"id": "d", "fields": [], "rows": [{"a": 1}]}],
            "views": [{"id": "v", "width": 10, "height": 10, "scales": [],
                       "marks": [{"id": "g", "type": "group", "dataset": "d",
                                  "encodings": {}}]}],
        })
        report = is_expressible_vegalite(InteractionSet(), chart)
        assert [e["code"] for e in report] == ["UnsupportedMark"]


class TestCompileVegaLite:
    def test_filter_becomes_selection_transform(self, seattle, brush_model):
        doc = compile_vegalite(seattle, brush_model).document
        hist_unit = doc["vconcat"][1]
        assert hist_unit["transform"] == [{"filter": {"selection": "brush"}}]

    def test_projected_point_condition(self, seattle):
        inter = load_fixture_interactions("seattle_click.interactions.json")
        doc = compile_vegalite(seattle, inter).document
        hist_unit = doc["vconcat"][1]
        assert hist_unit["selection"]["pick"] == {"type": "single",
                                                  "fields": ["weather"]}
        color = hist_unit["encoding"]["color"]
        assert color["condition"]["selection"] == "pick"
        assert color["value"] == "lightgray"

    def test_interval_projection_encodings(self, seattle, brush_model):
        doc = compile_vegalite(seattle, brush_model).document
        sel = doc["vconcat"][0]["selection"]["brush"]
        assert sel == {"type": "interval", "encodings": ["x"]}

    def test_pan_zoom_binds_scales(self):
        chart, inter = gallery_pair("pan_zoom")
        doc = compile_vegalite(chart, inter).document
        assert doc["selection"]["grid"] == {
            "type": "interval", "encodings": ["x", "y"], "bind": "scales"}

    def test_scale_domain_lowering(self):
        chart, inter = gallery_pair("overview_detail")
        doc = compile_vegalite(chart, inter).document
        detail_x = doc["vconcat"][0]["encoding"]["x"]
        assert detail_x["scale"]["domain"] == {"selection": "window",
                                               "encoding": "x"}

    def test_not_expressible_raises(self):
        chart = load_fixture_chart("seattle_scatter_brushlabel.chart.json")
        inter = load_fixture_interactions("brush_label.interactions.json")
        with pytest.raises(NotExpressible) as exc:
            compile_vegalite(chart, inter)
        assert {e["code"] for e in exc.value.report} == {"SignalBinding"}

    def test_schema_validity(self, seattle, brush_model):
        doc = compile_vegalite(seattle, brush_model).document
        assert is_valid(doc, VEGA_LITE)

    def test_multi_mark_view_lowers_to_layers(self):
        # The brush-label chart (scatter + two text labels) is expressible
        # as long as no signal bindings are attached.
        chart = load_fixture_chart("seattle_scatter_brushlabel.chart.json")
        inter = load_fixture_interactions("brush_label.interactions.json")
        stripped = InteractionSet(selections=inter.selections,
                                  applications=inter.applications)
        assert is_expressible_vegalite(stripped, chart) == []
        doc = compile_vegalite(chart, stripped).document
        assert len(doc["layer"]) == 3
        assert doc["layer"][0]["selection"]["brush"]["type"] == "interval"
        assert doc["layer"][1]["mark"] == {"type": "text"}
        assert is_valid(doc, VEGA_LITE)

    def test_multi_hover_variants(self, seattle):
        inter = parse_interactions(json.dumps({
            "version": 1,
            "selections": [{"id": "hov", "kind": "point", "on": "hover",
                            "view": "scatter", "cardinality": "multi"}],
            "applications": [{"id": "c", "selection": "hov",
                              "kind": "conditional_encoding", "channel": "opacity",
                              "target": "scatter_points"}],
        }))
        doc = compile_vegalite(seattle, inter).document
        sel = doc["vconcat"][0]["selection"]["hov"]
        assert sel == {"type": "multi", "on": "mouseover"}


class TestLowerSelection:
    def test_names_match_enumeration_exactly(self, seattle):
        cases = [
            Selection(id="brush", kind="interval", event_source="drag",
                      source_view="scatter", projection=("x",)),
            Selection(id="brush", kind="interval", event_source="drag",
                      source_view="scatter", projection=("x", "y")),
            Selection(id="pick", kind="point", event_source="click",
                      source_view="hist", cardinality="single"),
            Selection(id="pick", kind="point", event_source="hover",
                      source_view="scatter", cardinality="single"),
        ]
        for sel in cases:
            defs = lower_selection(sel, seattle)
            assert [d["name"] for d in defs] == \
                [d.name for d in enumerate_signals(sel, seattle)]

    def test_interval_data_signals_invert(self, seattle):
        sel = Selection(id="brush", kind="interval", event_source="drag",
                        source_view="scatter", projection=("x",))
        defs = {d["name"]: d for d in lower_selection(sel, seattle)}
        assert defs["brush_date_start"]["update"] == \
            "invert('scatter_x', brush_x_start)"
        assert "on" in defs["brush_x_end"]

    def test_click_single_has_value_signals_only(self, seattle):
        sel = Selection(id="pick", kind="point", event_source="click",
                        source_view="hist", cardinality="single")
        defs = lower_selection(sel, seattle)
        assert [d["name"] for d in defs] == ["pick_weather_value", "pick_count_value"]
        events = defs[0]["on"][0]["events"]
        assert events == [{"type": "click", "markname": "hist_bars"}]

    def test_hover_mouse_inversion(self, seattle):
        sel = Selection(id="probe", kind="point", event_source="hover",
                        source_view="scatter", cardinality="single")
        defs = {d["name"]: d for d in lower_selection(sel, seattle)}
        assert defs["probe_mouse_x_data"]["update"] == \
            "invert('scatter_x', probe_mouse_x)"
        assert any("pointerout" in json.dumps(h) for h in defs["probe_date_value"]["on"])

    def test_discrete_axis_band_inversion(self, seattle):
        sel = Selection(id="brush", kind="interval", event_source="drag",
                        source_view="hist", projection=("x",))
        defs = {d["name"]: d for d in lower_selection(sel, seattle)}
        expr = defs["brush_weather_start"]["update"]
        assert "domain('hist_x')" in expr and "bandwidth('hist_x')" in expr


class TestCompileVega:
    def test_brush_label_exact_signals(self):
        chart = load_fixture_chart("seattle_scatter_brushlabel.chart.json")
        inter = load_fixture_interactions("brush_label.interactions.json")
        doc = compile_vega(chart, inter).document
        assert set(signal_names(doc)) == {
            "brush_x_start", "brush_x_end", "brush_date_start", "brush_date_end"}
        texts = [m for m in iter_marks(doc["marks"]) if m.get("type") == "text"]
        by_name = {m["name"]: m for m in texts}
        assert by_name["label_start"]["encode"]["update"]["text"] == \
            {"signal": "brush_date_start"}
        assert by_name["label_start"]["encode"]["update"]["x"] == \
            {"signal": "brush_x_start"}
        assert by_name["label_end"]["encode"]["update"]["text"] == \
            {"signal": "brush_date_end"}

    def test_index_chart_single_rule(self):
        chart, inter = gallery_pair("index_chart")
        doc = compile_vega(chart, inter).document
        rules = [m for m in iter_marks(doc["marks"]) if m.get("type") == "rule"]
        assert len(rules) == 1
        assert rules[0]["encode"]["update"]["x"] == {"signal": "probe_mouse_x"}

    def test_empty_interactions_static_doc(self, seattle):
        doc = compile_vega(seattle, InteractionSet()).document
        assert signal_names(doc) == []
        assert is_valid(doc, VEGA)

    def test_every_gallery_fixture_schema_valid(self):
        for entry in GALLERY:
            chart = load_fixture_chart(entry["chart"])
            inter = load_fixture_interactions(entry["interactions"])
            doc = compile_vega(chart, inter).document
            assert is_valid(doc, VEGA), entry["name"]

    def test_name_agreement_across_fixtures(self):
        """Signals named into a selection's namespace equal its enumeration."""
        for entry in GALLERY:
            chart = load_fixture_chart(entry["chart"])
            inter = load_fixture_interactions(entry["interactions"])
            doc = compile_vega(chart, inter).document
            names = set(signal_names(doc))
            for sel in inter.selections:
                expected = {d.name for d in enumerate_signals(sel, chart)}
                actual = {n for n in names if n.startswith(sel.id + "_")}
                assert actual == expected, entry["name"]

    def test_application_completeness_walkthrough(self, seattle, brush_model):
        doc = compile_vega(seattle, brush_model).document
        # conditional color: exactly one production rule on the scatter points
        points = next(m for m in iter_marks(doc["marks"])
                      if m.get("name") == "scatter_points")
        fill = points["encode"]["update"]["fill"]
        assert isinstance(fill, list) and len(fill) == 2
        # filter: exactly one filter transform in the histogram's data chain
        data = {d["name"]: d for d in doc["data"]}
        filters = [t for t in data["hist_data"]["transform"]
                   if t["type"] == "filter"]
        assert len(filters) == 1
        # selection cluster: exactly the four brush signals
        assert set(signal_names(doc)) == {
            "brush_x_start", "brush_x_end", "brush_date_start", "brush_date_end"}

    def test_multi_point_store(self, seattle):
        inter = parse_interactions(json.dumps({
            "version": 1,
            "selections": [{"id": "pick", "kind": "point", "on": "click",
                            "view": "hist", "cardinality": "multi"}],
            "applications": [{"id": "c", "selection": "pick",
                              "kind": "conditional_encoding", "channel": "color",
                              "target": "hist_bars"}],
        }))
        doc = compile_vega(seattle, inter).document
        data = {d["name"]: d for d in doc["data"]}
        assert "pick_store" in data
        triggers = data["pick_store"]["on"]
        assert {t["trigger"] for t in triggers} == {
            "pick_weather_value", "pick_count_value"}
        bars = next(m for m in iter_marks(doc["marks"])
                    if m.get("name") == "hist_bars")
        assert "indata('pick_store'" in bars["encode"]["update"]["fill"][0]["test"]

    def test_pan_zoom_domain_signals(self):
        chart, inter = gallery_pair("pan_zoom")
        doc = compile_vega(chart, inter).document
        scales = {s["name"]: s for s in doc["scales"]}
        assert scales["scatter_x"]["domainRaw"] == {"signal": "scatter_x_domain"}
        assert scales["scatter_y"]["domainRaw"] == {"signal": "scatter_y_domain"}
        # helper signals stay out of the selection namespace
        helpers = [n for n in signal_names(doc) if n.startswith("pz_")]
        assert helpers, "pan/zoom helpers missing"

    def test_overview_detail_domain_override(self):
        chart, inter = gallery_pair("overview_detail")
        doc = compile_vega(chart, inter).document
        scales = {s["name"]: s for s in doc["scales"]}
        assert scales["detail_x"]["domainRaw"] == {"signal": "detail_x_domain"}
        sig = next(s for s in doc["signals"] if s["name"] == "detail_x_domain")
        assert "window_x_start === window_x_end ? null :" in sig["update"]

    def test_widget_filter_lowering(self):
        chart, inter = gallery_pair("widget_filter")
        doc = compile_vega(chart, inter).document
        sig = next(s for s in doc["signals"] if s["name"] == "wchange_value")
        assert sig["bind"]["input"] == "range"
        data = {d["name"]: d for d in doc["data"]}
        expr = data["bars_data"]["transform"][0]["expr"]
        assert "datum['change'] >= wchange_value" in expr

    def test_brush_rect_emitted_only_for_visible_brushes(self, seattle, brush_model):
        doc = compile_vega(seattle, brush_model).document
        rects = [m["name"] for m in iter_marks(doc["marks"])
                 if m.get("name", "").endswith("_brush")]
        assert rects == ["brush_brush"]
        chart, inter = gallery_pair("pan_zoom")
        doc2 = compile_vega(chart, inter).document
        rects2 = [m["name"] for m in iter_marks(doc2["marks"])
                  if m.get("name", "").endswith("_brush")]
        assert rects2 == []

    def test_invalid_interactions_refused(self, seattle):
        inter = parse_interactions(json.dumps({
            "version": 1,
            "selections": [{"id": "bad", "kind": "interval", "on": "drag",
                            "view": "hist", "projection": ["y"]}],
        }))
        with pytest.raises(CompileError):
            compile_vega(seattle, inter)


class TestSchemaDirOverride:
    def test_env_override_points_at_alternate_schemas(self, tmp_path, monkeypatch):
        import shutil

        from demoviz.compiler import schemas

        src = schemas.schema_dir()
        for fname in schemas.SCHEMA_FILES.values():
            shutil.copy(src / fname, tmp_path / fname)
        monkeypatch.setenv(schemas.SCHEMA_DIR_ENV, str(tmp_path))
        assert schemas.schema_dir() == tmp_path
        assert schemas.schema_path("vega") == tmp_path / "vega-v5.json"
        doc = {"$schema": "https://vega.github.io/schema/vega/v5.json",
               "width": 10, "height": 10}
        assert is_valid(doc, VEGA)

    def test_missing_override_dir_fails_loudly(self, tmp_path, monkeypatch):
        from demoviz.compiler import schemas

        monkeypatch.setenv(schemas.SCHEMA_DIR_ENV, str(tmp_path / "void"))
        with pytest.raises(OSError):
            schemas.validator("vega")


class TestApplicationCompleteness:
    def test_each_application_has_exactly_one_site(self):
        """Conditional -> one production rule; filter -> one transform;
        scale_domain / pan_zoom -> one domainRaw per target scale."""
        for entry in GALLERY:
            chart = load_fixture_chart(entry["chart"])
            inter = load_fixture_interactions(entry["interactions"])
            doc = compile_vega(chart, inter).document
            marks = {m["name"]: m for m in iter_marks(doc["marks"]) if "name" in m}
            data = {d["name"]: d for d in doc["data"]}
            scales = {s["name"]: s for s in doc["scales"]}
            widget_apps = [(w, a) for w in inter.widgets for a in w.applications]
            all_apps = [(None, a) for a in inter.applications] + widget_apps
            for _owner, app in all_apps:
                label = f"{entry['name']}:{app.id}"
                if app.kind == "conditional_encoding":
                    _, markdef = chart.mark(app.target)
                    prop = {"color": "stroke" if markdef.mark_type in ("line", "rule")
                            else "fill", "opacity": "opacity", "size": "size"}[app.channel]
                    enc = marks[app.target]["encode"]["update"][prop]
                    assert isinstance(enc, list) and len(enc) == 2, label
                elif app.kind == "filter":
                    transforms = data[f"{app.target}_data"]["transform"]
                    assert sum(t["type"] == "filter" for t in transforms) >= 1, label
                elif app.kind == "scale_domain":
                    assert "domainRaw" in scales[app.target], label
                elif app.kind == "pan_zoom":
                    for sid in app.scales:
                        assert "domainRaw" in scales[sid], label

    def test_each_selection_has_exactly_one_cluster(self):
        for entry in GALLERY:
            chart = load_fixture_chart(entry["chart"])
            inter = load_fixture_interactions(entry["interactions"])
            doc = compile_vega(chart, inter).document
            names = signal_names(doc)
            assert len(names) == len(set(names)), entry["name"]
            for sel in inter.selections:
                expected = [d.name for d in enumerate_signals(sel, chart)]
                present = [n for n in names if n.startswith(sel.id + "_")]
                assert sorted(present) == sorted(expected), entry["name"]


class TestDeterminism:
    def test_byte_stable_across_runs(self, seattle, brush_model):
        a = compile_vega(seattle, brush_model).text
        b = compile_vega(seattle, brush_model).text
        assert a == b
        c = compile_vegalite(seattle, brush_model).text
        d = compile_vegalite(seattle, brush_model).text
        assert c == d

    def test_byte_stable_across_fresh_loads(self):
        a_chart = load_fixture_chart("seattle_weather.chart.json")
        b_chart = load_fixture_chart("seattle_weather.chart.json")
        inter = load_fixture_interactions("seattle_brush.interactions.json")
        assert compile_vega(a_chart, inter).text == compile_vega(b_chart, inter).text

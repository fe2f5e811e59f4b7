#!/usr/bin/env python3
"""Regenerate the bundled fixture documents (charts, traces, interactions).

Deterministic: data comes from a seeded RNG, so re-running this script
reproduces the committed files byte-for-byte.
"""

from __future__ import annotations

import json
import random
from datetime import date, timedelta
from pathlib import Path

FIXTURES = Path(__file__).resolve().parent.parent / "src" / "demoviz" / "fixtures"

WEATHER_KINDS = ["sun", "rain", "fog", "snow", "drizzle"]


def write(relpath: str, doc) -> None:
    path = FIXTURES / relpath
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
    print(f"wrote {path}")


def seattle_rows(n: int = 120) -> list[dict]:
    rng = random.Random(20120101)
    start = date(2012, 1, 1)
    rows = []
    for i in range(n):
        d = start + timedelta(days=i)
        weather = rng.choices(WEATHER_KINDS, weights=[5, 6, 2, 1, 3])[0]
        base = 8 + 14 * (0.5 - abs((i % 120) - 60) / 120)
        bump = {"sun": 6, "rain": 0, "fog": 2, "snow": -6, "drizzle": 1}[weather]
        temp = round(base + bump + rng.uniform(-3, 3), 1)
        wind = round(rng.uniform(0.5, 9.5), 1)
        rows.append({
            "date": d.isoformat(),
            "temp_max": temp,
            "wind": wind,
            "weather": weather,
        })
    return rows


def stocks_rows() -> list[dict]:
    rng = random.Random(42)
    start = date(2010, 1, 1)
    rows = []
    for symbol, drift, price in (("AAA", 0.004, 60.0), ("BBB", -0.001, 90.0), ("CCC", 0.002, 40.0)):
        p = price
        for i in range(40):
            d = start + timedelta(days=7 * i)
            p = max(5.0, p * (1 + drift + rng.uniform(-0.03, 0.03)))
            rows.append({"date": d.isoformat(), "price": round(p, 2), "symbol": symbol})
    return rows


def budget_rows() -> list[dict]:
    rng = random.Random(7)
    programs = [
        "Agriculture", "Commerce", "Defense", "Education", "Energy",
        "Health", "Housing", "Interior", "Justice", "Labor",
        "State", "Transport", "Treasury", "Veterans", "Science",
    ]
    return [
        {"program": name, "change": round(rng.uniform(-40, 60), 1)}
        for name in programs
    ]


def seattle_dataset() -> dict:
    return {
        "id": "seattle",
        "fields": [
            {"name": "date", "type": "temporal"},
            {"name": "temp_max", "type": "quantitative"},
            {"name": "wind", "type": "quantitative"},
            {"name": "weather", "type": "nominal"},
        ],
        "rows": seattle_rows(),
    }


def scatter_view(view_id: str = "scatter", *, width=480, height=300,
                 extra_marks=()) -> dict:
    return {
        "id": view_id,
        "width": width,
        "height": height,
        "scales": [
            {"id": f"{view_id}_x", "channel": "x", "kind": "continuous",
             "field": "date", "range": [0, width]},
            {"id": f"{view_id}_y", "channel": "y", "kind": "continuous",
             "field": "temp_max", "range": [height, 0]},
            {"id": f"{view_id}_color", "channel": "color", "kind": "discrete",
             "field": "weather"},
        ],
        "marks": [
            {
                "id": f"{view_id}_points",
                "type": "symbol",
                "dataset": "seattle",
                "encodings": {
                    "x": {"scale": f"{view_id}_x", "field": "date"},
                    "y": {"scale": f"{view_id}_y", "field": "temp_max"},
                    "color": {"scale": f"{view_id}_color", "field": "weather"},
                },
            },
            *extra_marks,
        ],
    }


def hist_view() -> dict:
    return {
        "id": "hist",
        "width": 480,
        "height": 200,
        "scales": [
            {"id": "hist_x", "channel": "x", "kind": "discrete",
             "field": "weather", "range": [0, 480]},
            {"id": "hist_y", "channel": "y", "kind": "continuous",
             "field": "weather", "aggregate": "count", "range": [200, 0]},
            {"id": "hist_color", "channel": "color", "kind": "discrete",
             "field": "weather"},
        ],
        "marks": [
            {
                "id": "hist_bars",
                "type": "rect",
                "dataset": "seattle",
                "encodings": {
                    "x": {"scale": "hist_x", "field": "weather"},
                    "y": {"scale": "hist_y", "field": "weather"},
                    "color": {"scale": "hist_color", "field": "weather"},
                },
            }
        ],
    }


def main() -> None:
    # --- Charts ------------------------------------------------------------
    write("seattle_weather.chart.json", {
        "version": 1,
        "datasets": [seattle_dataset()],
        "views": [scatter_view(), hist_view()],
    })

    write("seattle_scatter.chart.json", {
        "version": 1,
        "datasets": [seattle_dataset()],
        "views": [scatter_view()],
    })

    label = {
        "id": "scatter_label",
        "type": "text",
        "dataset": "seattle",
        "encodings": {
            "x": {"value": 0},
            "y": {"value": 0},
            "color": {"value": "#222222"},
        },
    }
    write("seattle_scatter_labeled.chart.json", {
        "version": 1,
        "datasets": [seattle_dataset()],
        "views": [scatter_view(extra_marks=(label,))],
    })

    label_start = {
        "id": "label_start",
        "type": "text",
        "dataset": "seattle",
        "encodings": {"x": {"value": 0}, "y": {"value": 14}},
    }
    label_end = {
        "id": "label_end",
        "type": "text",
        "dataset": "seattle",
        "encodings": {"x": {"value": 0}, "y": {"value": 14}},
    }
    write("seattle_scatter_brushlabel.chart.json", {
        "version": 1,
        "datasets": [seattle_dataset()],
        "views": [scatter_view(extra_marks=(label_start, label_end))],
    })

    second = {
        "id": "scatter2",
        "width": 480,
        "height": 300,
        "scales": [
            {"id": "scatter2_x", "channel": "x", "kind": "continuous",
             "field": "wind", "range": [0, 480]},
            {"id": "scatter2_y", "channel": "y", "kind": "continuous",
             "field": "temp_max", "range": [300, 0]},
            {"id": "scatter2_color", "channel": "color", "kind": "discrete",
             "field": "weather"},
        ],
        "marks": [
            {
                "id": "scatter2_points",
                "type": "symbol",
                "dataset": "seattle",
                "encodings": {
                    "x": {"scale": "scatter2_x", "field": "wind"},
                    "y": {"scale": "scatter2_y", "field": "temp_max"},
                    "color": {"scale": "scatter2_color", "field": "weather"},
                },
            }
        ],
    }
    write("seattle_two_scatter.chart.json", {
        "version": 1,
        "datasets": [seattle_dataset()],
        "views": [scatter_view(), second],
    })

    stocks_dataset = {
        "id": "stocks",
        "fields": [
            {"name": "date", "type": "temporal"},
            {"name": "price", "type": "quantitative"},
            {"name": "symbol", "type": "nominal"},
        ],
        "rows": stocks_rows(),
    }
    write("stocks.chart.json", {
        "version": 1,
        "datasets": [stocks_dataset],
        "views": [{
            "id": "lines",
            "width": 560,
            "height": 300,
            "scales": [
                {"id": "lines_x", "channel": "x", "kind": "continuous",
                 "field": "date", "range": [0, 560]},
                {"id": "lines_y", "channel": "y", "kind": "continuous",
                 "field": "price", "range": [300, 0]},
                {"id": "lines_color", "channel": "color", "kind": "discrete",
                 "field": "symbol"},
            ],
            "marks": [
                {
                    "id": "price_lines",
                    "type": "line",
                    "dataset": "stocks",
                    "encodings": {
                        "x": {"scale": "lines_x", "field": "date"},
                        "y": {"scale": "lines_y", "field": "price"},
                        "color": {"scale": "lines_color", "field": "symbol"},
                    },
                },
                {
                    "id": "probe_rule",
                    "type": "rule",
                    "dataset": "stocks",
                    "encodings": {},
                },
            ],
        }],
    })

    write("stocks_overview.chart.json", {
        "version": 1,
        "datasets": [stocks_dataset],
        "views": [
            {
                "id": "detail",
                "width": 480,
                "height": 250,
                "scales": [
                    {"id": "detail_x", "channel": "x", "kind": "continuous",
                     "field": "date", "range": [0, 480]},
                    {"id": "detail_y", "channel": "y", "kind": "continuous",
                     "field": "price", "range": [250, 0]},
                    {"id": "detail_color", "channel": "color", "kind": "discrete",
                     "field": "symbol"},
                ],
                "marks": [{
                    "id": "detail_lines",
                    "type": "line",
                    "dataset": "stocks",
                    "encodings": {
                        "x": {"scale": "detail_x", "field": "date"},
                        "y": {"scale": "detail_y", "field": "price"},
                        "color": {"scale": "detail_color", "field": "symbol"},
                    },
                }],
            },
            {
                "id": "overview",
                "width": 480,
                "height": 80,
                "scales": [
                    {"id": "overview_x", "channel": "x", "kind": "continuous",
                     "field": "date", "range": [0, 480]},
                    {"id": "overview_y", "channel": "y", "kind": "continuous",
                     "field": "price", "aggregate": "mean", "range": [80, 0]},
                ],
                "marks": [{
                    "id": "overview_area",
                    "type": "area",
                    "dataset": "stocks",
                    "encodings": {
                        "x": {"scale": "overview_x", "field": "date"},
                        "y": {"scale": "overview_y", "field": "price"},
                    },
                }],
            },
        ],
    })

    write("budget.chart.json", {
        "version": 1,
        "datasets": [{
            "id": "budget",
            "fields": [
                {"name": "program", "type": "nominal"},
                {"name": "change", "type": "quantitative"},
            ],
            "rows": budget_rows(),
        }],
        "views": [{
            "id": "bars",
            "width": 600,
            "height": 260,
            "scales": [
                {"id": "bars_x", "channel": "x", "kind": "discrete",
                 "field": "program", "range": [0, 600]},
                {"id": "bars_y", "channel": "y", "kind": "continuous",
                 "field": "change", "range": [260, 0]},
            ],
            "marks": [{
                "id": "bars_rects",
                "type": "rect",
                "dataset": "budget",
                "encodings": {
                    "x": {"scale": "bars_x", "field": "program"},
                    "y": {"scale": "bars_y", "field": "change"},
                },
            }],
        }],
    })

    # --- Traces ------------------------------------------------------------
    write("traces/horizontal_drag.trace.json", [
        {"kind": "pointerdown", "x": 100, "y": 150, "t": 0, "viewId": "scatter"},
        {"kind": "pointermove", "x": 150, "y": 152, "t": 120, "viewId": "scatter"},
        {"kind": "pointermove", "x": 180, "y": 154, "t": 230, "viewId": "scatter"},
        {"kind": "pointerup", "x": 200, "y": 155, "t": 300, "viewId": "scatter"},
    ])
    write("traces/vertical_drag.trace.json", [
        {"kind": "pointerdown", "x": 240, "y": 60, "t": 0, "viewId": "scatter"},
        {"kind": "pointermove", "x": 242, "y": 140, "t": 150, "viewId": "scatter"},
        {"kind": "pointerup", "x": 245, "y": 220, "t": 280, "viewId": "scatter"},
    ])
    write("traces/diagonal_drag.trace.json", [
        {"kind": "pointerdown", "x": 100, "y": 80, "t": 0, "viewId": "scatter"},
        {"kind": "pointermove", "x": 160, "y": 140, "t": 150, "viewId": "scatter"},
        {"kind": "pointerup", "x": 220, "y": 200, "t": 280, "viewId": "scatter"},
    ])
    write("traces/bar_click.trace.json", [
        {"kind": "click", "x": 130, "y": 170, "t": 0, "viewId": "hist",
         "target": {"markId": "hist_bars", "datumIndex": 1}},
    ])
    write("traces/bar_double_click.trace.json", [
        {"kind": "click", "x": 130, "y": 170, "t": 0, "viewId": "hist",
         "target": {"markId": "hist_bars", "datumIndex": 1}},
        {"kind": "click", "x": 220, "y": 180, "t": 500, "viewId": "hist",
         "target": {"markId": "hist_bars", "datumIndex": 2}},
    ])
    write("traces/hover.trace.json", [
        {"kind": "hoverenter", "x": 200, "y": 120, "t": 0, "viewId": "scatter",
         "target": {"markId": "scatter_points", "datumIndex": 17}},
        {"kind": "pointermove", "x": 204, "y": 122, "t": 80, "viewId": "scatter"},
    ])
    write("traces/overview_drag.trace.json", [
        {"kind": "pointerdown", "x": 60, "y": 30, "t": 0, "viewId": "overview"},
        {"kind": "pointermove", "x": 180, "y": 34, "t": 150, "viewId": "overview"},
        {"kind": "pointerup", "x": 300, "y": 38, "t": 300, "viewId": "overview"},
    ])

    # --- Walkthrough interaction models -------------------------------------
    write("seattle_brush.interactions.json", {
        "version": 1,
        "selections": [
            {"id": "brush", "kind": "interval", "on": "drag",
             "view": "scatter", "projection": ["x"]},
        ],
        "applications": [
            {"id": "brush_color", "selection": "brush",
             "kind": "conditional_encoding", "channel": "color",
             "target": "scatter_points"},
            {"id": "brush_filter", "selection": "brush",
             "kind": "filter", "target": "hist"},
        ],
        "widgets": [],
        "bindings": [],
    })

    write("seattle_click.interactions.json", {
        "version": 1,
        "selections": [
            {"id": "pick", "kind": "point", "on": "click", "view": "hist",
             "cardinality": "single", "projection": ["weather"]},
        ],
        "applications": [
            {"id": "pick_color", "selection": "pick",
             "kind": "conditional_encoding", "channel": "color",
             "target": "hist_bars"},
            {"id": "pick_filter", "selection": "pick",
             "kind": "filter", "target": "scatter"},
        ],
        "widgets": [],
        "bindings": [],
    })

    write("brush_label.interactions.json", {
        "version": 1,
        "selections": [
            {"id": "brush", "kind": "interval", "on": "drag",
             "view": "scatter", "projection": ["x"]},
        ],
        "applications": [
            {"id": "brush_color", "selection": "brush",
             "kind": "conditional_encoding", "channel": "color",
             "target": "scatter_points"},
        ],
        "widgets": [],
        "bindings": [
            {"signal": "brush_date_start", "mark": "label_start", "property": "text"},
            {"signal": "brush_x_start", "mark": "label_start", "property": "x"},
            {"signal": "brush_date_end", "mark": "label_end", "property": "text"},
            {"signal": "brush_x_end", "mark": "label_end", "property": "x"},
        ],
    })

    # --- Gallery -------------------------------------------------------------
    write("gallery/point_select.interactions.json", {
        "version": 1,
        "selections": [
            {"id": "pick", "kind": "point", "on": "click", "view": "scatter",
             "cardinality": "multi", "projection": ["weather"]},
        ],
        "applications": [
            {"id": "pick_color", "selection": "pick",
             "kind": "conditional_encoding", "channel": "color",
             "target": "scatter_points"},
        ],
        "widgets": [],
        "bindings": [],
    })

    write("gallery/brush_select.interactions.json", {
        "version": 1,
        "selections": [
            {"id": "brush", "kind": "interval", "on": "drag",
             "view": "scatter", "projection": ["x", "y"]},
        ],
        "applications": [
            {"id": "brush_color", "selection": "brush",
             "kind": "conditional_encoding", "channel": "color",
             "target": "scatter_points"},
            {"id": "brush_opacity", "selection": "brush",
             "kind": "conditional_encoding", "channel": "opacity",
             "target": "scatter_points"},
        ],
        "widgets": [],
        "bindings": [],
    })

    write("gallery/pan_zoom.interactions.json", {
        "version": 1,
        "selections": [
            {"id": "grid", "kind": "interval", "on": "drag",
             "view": "scatter", "projection": ["x", "y"]},
        ],
        "applications": [
            {"id": "grid_panzoom", "selection": "grid", "kind": "pan_zoom",
             "target": "scatter", "scales": ["scatter_x", "scatter_y"]},
        ],
        "widgets": [],
        "bindings": [],
    })

    write("gallery/index_chart.interactions.json", {
        "version": 1,
        "selections": [
            {"id": "probe", "kind": "point", "on": "hover", "view": "lines",
             "cardinality": "single"},
        ],
        "applications": [],
        "widgets": [],
        "bindings": [
            {"signal": "probe_mouse_x", "mark": "probe_rule", "property": "x"},
        ],
    })

    write("gallery/tooltip.interactions.json", {
        "version": 1,
        "selections": [
            {"id": "probe", "kind": "point", "on": "hover", "view": "scatter",
             "cardinality": "single"},
        ],
        "applications": [
            {"id": "probe_size", "selection": "probe",
             "kind": "conditional_encoding", "channel": "size",
             "target": "scatter_points"},
        ],
        "widgets": [],
        "bindings": [
            {"signal": "probe_temp_max_value", "mark": "scatter_label",
             "property": "text"},
            {"signal": "probe_mouse_x", "mark": "scatter_label", "property": "x"},
            {"signal": "probe_mouse_y", "mark": "scatter_label", "property": "y"},
        ],
    })

    write("gallery/overview_detail.interactions.json", {
        "version": 1,
        "selections": [
            {"id": "window", "kind": "interval", "on": "drag",
             "view": "overview", "projection": ["x"]},
        ],
        "applications": [
            {"id": "window_domain", "selection": "window",
             "kind": "scale_domain", "target": "detail_x"},
        ],
        "widgets": [],
        "bindings": [],
    })

    write("gallery/widget_filter.interactions.json", {
        "version": 1,
        "selections": [],
        "applications": [],
        "widgets": [{
            "id": "wchange",
            "field": "change",
            "widgetKind": "range",
            "comparator": ">=",
            "applications": [
                {"id": "wchange_filter", "kind": "filter", "target": "bars"},
            ],
        }],
        "bindings": [],
    })

    write("gallery/brushing_linking.interactions.json", {
        "version": 1,
        "selections": [
            {"id": "brush", "kind": "interval", "on": "drag",
             "view": "scatter", "projection": ["x", "y"]},
        ],
        "applications": [
            {"id": "brush_color", "selection": "brush",
             "kind": "conditional_encoding", "channel": "color",
             "target": "scatter_points"},
            {"id": "brush_link", "selection": "brush",
             "kind": "conditional_encoding", "channel": "color",
             "target": "scatter2_points"},
        ],
        "widgets": [],
        "bindings": [],
    })

    write("gallery/manifest.json", [
        {"name": "point_select", "chart": "seattle_scatter.chart.json",
         "interactions": "gallery/point_select.interactions.json"},
        {"name": "brush_select", "chart": "seattle_scatter.chart.json",
         "interactions": "gallery/brush_select.interactions.json"},
        {"name": "pan_zoom", "chart": "seattle_scatter.chart.json",
         "interactions": "gallery/pan_zoom.interactions.json"},
        {"name": "index_chart", "chart": "stocks.chart.json",
         "interactions": "gallery/index_chart.interactions.json"},
        {"name": "tooltip", "chart": "seattle_scatter_labeled.chart.json",
         "interactions": "gallery/tooltip.interactions.json"},
        {"name": "overview_detail", "chart": "stocks_overview.chart.json",
         "interactions": "gallery/overview_detail.interactions.json"},
        {"name": "widget_filter", "chart": "budget.chart.json",
         "interactions": "gallery/widget_filter.interactions.json"},
        {"name": "brushing_linking", "chart": "seattle_two_scatter.chart.json",
         "interactions": "gallery/brushing_linking.interactions.json"},
    ])


if __name__ == "__main__":
    main()

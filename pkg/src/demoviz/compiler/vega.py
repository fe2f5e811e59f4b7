"""Lowering to full Vega (v5) documents.

Every chart view becomes a named, transparent group mark (so pointer events
can be scoped to it); scales are hoisted to the top level (chart ids are
globally unique) so top-level signals can invert them. Selections unwrap
into their constituent signals; applications become conditional encodings,
filter transforms, or scale-domain overrides; signal bindings write mark
properties directly; widgets become bound input signals.
"""

from __future__ import annotations

from typing import Any

from ..chart import (
    ChartSpec,
    Encoding,
    MarkDef,
    ScaleDef,
    ViewDef,
    aggregate_output_name,
)
from ..errors import CompileError
from ..interactions import (
    InteractionSet,
    QueryWidget,
    Selection,
    SignalDescriptor,
    enumerate_signals,
    validate_set,
)
from . import common
from .schemas import SCHEMA_URLS, VEGA, structural_errors

#: Vertical gap between stacked views (room for the lower view's axis).
VIEW_GAP = 60

SYMBOL_COLOR = "#4c78a8"
BRUSH_FILL = "#4c78a8"


def view_group_name(view_id: str) -> str:
    return f"view_{view_id}"


def view_offsets(chart: ChartSpec) -> dict[str, tuple[float, float]]:
    """Views stack vertically at x = 0, in declaration order."""
    offsets: dict[str, tuple[float, float]] = {}
    oy: float = 0
    for view in chart.views:
        offsets[view.id] = (0, oy)
        oy += view.height + VIEW_GAP
    return offsets


def _extent(view: ViewDef) -> tuple[float, float]:
    return view.width, view.height


# ---------------------------------------------------------------------------
# Event stream helpers


def _ev(etype: str, **kw: Any) -> dict[str, Any]:
    d: dict[str, Any] = {"type": etype}
    d.update(kw)
    return d


def _drag_move_events(gname: str) -> list[dict[str, Any]]:
    return [{
        "type": "pointermove",
        "source": "window",
        "consume": True,
        "between": [
            _ev("pointerdown", markname=gname),
            _ev("pointerup", source="window"),
        ],
    }]


def _point_target_marks(chart: ChartSpec, view: ViewDef) -> list[MarkDef]:
    """Marks whose data a point selection can capture (field-encoded only)."""
    return [
        m for m in view.marks
        if any(e.kind == "field" for e in m.encodings.values())
    ]


# ---------------------------------------------------------------------------
# Selection lowering


def lower_selection(selection: Selection, chart: ChartSpec) -> list[dict[str, Any]]:
    """Emit the signal definitions for one selection.

    The emitted names match :func:`enumerate_signals` exactly, one
    definition each. Pixel signals carry the event wiring; data signals are
    reactive scale inversions of their pixel partners.
    """
    view = chart.view(selection.source_view)
    ox, oy = view_offsets(chart)[view.id]
    w, h = _extent(view)
    gname = view_group_name(view.id)
    descriptors = enumerate_signals(selection, chart)
    defs: list[dict[str, Any]] = []

    if selection.kind == "interval":
        for desc in descriptors:
            if desc.space == "pixel":
                if desc.axis == "x":
                    update = f"clamp(x() - {ox:g}, 0, {w:g})"
                else:
                    update = f"clamp(y() - {oy:g}, 0, {h:g})"
                on = [{"events": [_ev("pointerdown", markname=gname)], "update": update}]
                if desc.role == "end":
                    on.append({"events": _drag_move_events(gname), "update": update})
                defs.append({"name": desc.name, "value": 0, "on": on})
            else:
                scale = view.scale_for(desc.axis)
                pixel_name = f"{selection.id}_{desc.axis}_{desc.role}"
                defs.append({
                    "name": desc.name,
                    "update": common.invert_expr(scale.id, scale.domain_kind, pixel_name),
                })
        return defs

    targets = _point_target_marks(chart, view)
    etype = "click" if selection.event_source == "click" else "pointerover"
    for desc in descriptors:
        if desc.role == "value":
            on: list[dict[str, Any]] = []
            if targets:
                on.append({
                    "events": [_ev(etype, markname=m.id) for m in targets],
                    "update": f"datum['{desc.field}']",
                })
            if selection.event_source == "hover" and targets:
                on.append({
                    "events": [_ev("pointerout", markname=m.id) for m in targets],
                    "update": "null",
                })
            defs.append({"name": desc.name, "value": None, "on": on})
        elif desc.space == "pixel":  # mouse_x / mouse_y on hover
            axis_fn = "x" if desc.role == "mouse_x" else "y"
            off = ox if axis_fn == "x" else oy
            span = w if axis_fn == "x" else h
            local = f"clamp({axis_fn}(), 0, {span:g})"
            rooted = f"clamp({axis_fn}() - {off:g}, 0, {span:g})"
            on = [{"events": [_ev("pointermove", markname=gname)], "update": rooted}]
            if targets:
                on.append({
                    "events": [_ev("pointermove", markname=m.id) for m in targets],
                    "update": local,
                })
            defs.append({"name": desc.name, "value": 0, "on": on})
        else:  # mouse data coordinates: reactive inversion
            scale = view.scale_for(desc.axis)
            pixel_name = f"{selection.id}_{desc.role}"
            defs.append({
                "name": desc.name,
                "update": common.invert_expr(scale.id, scale.domain_kind, pixel_name),
            })
    return defs


def _selection_data(selection: Selection, chart: ChartSpec) -> list[dict[str, Any]]:
    """Multi point selections accumulate clicked tuples in a keyed store."""
    if selection.kind != "point" or selection.cardinality != "multi":
        return []
    keys = common.point_key_fields(selection, chart)
    if not keys:
        return []
    key_expr = common.point_key_expr_signals(selection, chart)
    triggers = [
        {"trigger": f"{selection.id}_{f.name}_value", "insert": f"{{key: {key_expr}}}"}
        for f in keys
    ]
    return [{"name": common.point_store_name(selection), "values": [], "on": triggers}]


def _brush_rect(selection: Selection, chart: ChartSpec) -> dict[str, Any]:
    view = chart.view(selection.source_view)
    w, h = _extent(view)
    sid = selection.id
    enc: dict[str, Any] = {
        "fill": {"value": BRUSH_FILL},
        "fillOpacity": {"value": 0.125},
        "stroke": {"value": BRUSH_FILL},
        "strokeOpacity": {"value": 0.4},
    }
    if "x" in selection.projection:
        enc["x"] = {"signal": f"{sid}_x_start"}
        enc["x2"] = {"signal": f"{sid}_x_end"}
    else:
        enc["x"], enc["x2"] = {"value": 0}, {"value": w}
    if "y" in selection.projection:
        enc["y"] = {"signal": f"{sid}_y_start"}
        enc["y2"] = {"signal": f"{sid}_y_end"}
    else:
        enc["y"], enc["y2"] = {"value": 0}, {"value": h}
    return {
        "type": "rect",
        "name": f"{sid}_brush",
        "interactive": False,
        "encode": {"update": enc},
    }


# ---------------------------------------------------------------------------
# Widgets


def _widget_signals(widget: QueryWidget, chart: ChartSpec) -> list[dict[str, Any]]:
    kind = widget.widget_kind
    if kind in ("radio", "select"):
        return [{
            "name": common.widget_signal_name(widget),
            "value": None,
            "bind": {"input": kind, "options": common.widget_options(chart, widget)},
        }]
    if kind == "text":
        return [{
            "name": common.widget_signal_name(widget),
            "value": None,
            "bind": {"input": "text"},
        }]
    lo, hi = common.widget_extent(chart, widget)
    step = (hi - lo) / 100 if hi > lo else 1
    bind = {"input": "range", "min": lo, "max": hi, "step": step}
    if widget.comparator == "between":
        return [
            {"name": f"{widget.id}_lo", "value": lo, "bind": dict(bind)},
            {"name": f"{widget.id}_hi", "value": hi, "bind": dict(bind)},
        ]
    init = hi if widget.comparator in ("<", "<=", "==") else lo
    return [{"name": common.widget_signal_name(widget), "value": init, "bind": bind}]


# ---------------------------------------------------------------------------
# Pan & zoom


def _pan_zoom_signals(chart: ChartSpec, view: ViewDef,
                      scales: list[ScaleDef]) -> tuple[list[dict[str, Any]], dict[str, str]]:
    """Anchored pan/zoom: returns (signals, scale_id -> domain signal name)."""
    gname = view_group_name(view.id)
    ox, oy = view_offsets(chart)[view.id]
    w, h = _extent(view)
    vid = view.id
    down, delta = f"pz_{vid}_down", f"pz_{vid}_delta"
    zoom, anchor = f"pz_{vid}_zoom", f"pz_{vid}_anchor"

    def invert_at(axis: str) -> str:
        scale = view.scale_for(axis)
        if scale is None or scale.domain_kind != "continuous":
            return "0"
        probe = f"x() - {ox:g}" if axis == "x" else f"y() - {oy:g}"
        return f"+invert('{scale.id}', {probe})"

    signals: list[dict[str, Any]] = [
        {"name": down, "value": None, "on": [
            {"events": [_ev("pointerdown", markname=gname)], "update": "[x(), y()]"},
            {"events": [_ev("pointerup", source="window")], "update": "null"},
        ]},
        {"name": delta, "value": [0, 0], "on": [
            {"events": _drag_move_events(gname),
             "update": f"{down} ? [x() - {down}[0], y() - {down}[1]] : [0, 0]"},
        ]},
        {"name": zoom, "value": 1, "on": [
            {"events": [_ev("wheel", markname=gname, consume=True)],
             "update": "pow(1.0005, event.deltaY * pow(16, event.deltaMode))"},
        ]},
        {"name": anchor, "value": [0, 0], "on": [
            {"events": [_ev("wheel", markname=gname)],
             "update": f"[{invert_at('x')}, {invert_at('y')}]"},
        ]},
    ]
    domain_signals: dict[str, str] = {}
    for scale in scales:
        cur = f"pz_{vid}_cur_{scale.id}"
        dom = f"{scale.id}_domain"
        fallback = f"[+domain('{scale.id}')[0], +domain('{scale.id}')[1]]"
        signals.append({"name": cur, "value": None, "on": [
            {"events": [_ev("pointerdown", markname=gname), _ev("wheel", markname=gname)],
             "update": f"{dom} ? slice({dom}) : {fallback}"},
        ]})
        if scale.channel == "x":
            pan = (f"[{cur}[0] - {delta}[0] * span({cur}) / {w:g}, "
                   f"{cur}[1] - {delta}[0] * span({cur}) / {w:g}]")
            anchor_pt = f"{anchor}[0]"
        else:
            pan = (f"[{cur}[0] + {delta}[1] * span({cur}) / {h:g}, "
                   f"{cur}[1] + {delta}[1] * span({cur}) / {h:g}]")
            anchor_pt = f"{anchor}[1]"
        zoom_expr = (f"[{anchor_pt} + ({cur}[0] - {anchor_pt}) * {zoom}, "
                     f"{anchor_pt} + ({cur}[1] - {anchor_pt}) * {zoom}]")
        # An unset anchor (no pointerdown yet) keeps the current domain.
        pan = f"{cur} ? {pan} : {dom}"
        zoom_expr = f"{cur} ? {zoom_expr} : {dom}"
        signals.append({"name": dom, "value": None, "on": [
            {"events": {"signal": delta}, "update": pan},
            {"events": {"signal": zoom}, "update": zoom_expr},
        ]})
        domain_signals[scale.id] = dom
    return signals, domain_signals


# ---------------------------------------------------------------------------
# Static structure


def _temporal_fields(chart: ChartSpec, dataset_id: str) -> list[str]:
    table = chart.dataset(dataset_id)
    return [f.name for f in table.fields if f.measure_type == "temporal"]


def _mark_aggregate(view: ViewDef, mark: MarkDef) -> dict[str, Any] | None:
    """Aggregate transform implied by the mark's aggregate-scale encodings."""
    groupby: list[str] = []
    ops: list[str] = []
    fields: list[str | None] = []
    names: list[str] = []
    for enc in mark.encodings.values():
        if enc.kind != "field":
            continue
        scale = view.scale(enc.scale)
        if scale.is_aggregate:
            out = aggregate_output_name(scale.aggregate, enc.field)
            if out not in names:
                ops.append(scale.aggregate)
                fields.append(None if scale.aggregate == "count" else enc.field)
                names.append(out)
        elif enc.field not in groupby:
            groupby.append(enc.field)
    if not ops:
        return None
    return {"type": "aggregate", "groupby": groupby, "ops": ops,
            "fields": fields, "as": names}


def _mark_data_name(view: ViewDef, mark: MarkDef, filtered_views: set[str]) -> str | None:
    if not any(e.kind == "field" for e in mark.encodings.values()):
        return None
    if _mark_aggregate(view, mark) is not None:
        return f"{mark.id}_data"
    if view.id in filtered_views:
        return f"{view.id}_data"
    return mark.dataset


def _build_data(chart: ChartSpec, view_filters: dict[str, list[str]]) -> list[dict[str, Any]]:
    entries: list[dict[str, Any]] = []
    for table in chart.datasets:
        entry: dict[str, Any] = {"name": table.id, "values": [dict(r) for r in table.rows]}
        formulas = [
            {"type": "formula", "expr": f"toDate(datum['{f}'])", "as": f}
            for f in _temporal_fields(chart, table.id)
        ]
        if formulas:
            entry["transform"] = formulas
        entries.append(entry)

    filtered_views = {v for v, preds in view_filters.items() if preds}
    for view in chart.views:
        if view.id in filtered_views:
            source = view.marks[0].dataset if view.marks else chart.datasets[0].id
            entries.append({
                "name": f"{view.id}_data",
                "source": source,
                "transform": [{"type": "filter", "expr": p} for p in view_filters[view.id]],
            })
        for mark in view.marks:
            agg = _mark_aggregate(view, mark)
            if agg is not None:
                source = f"{view.id}_data" if view.id in filtered_views else mark.dataset
                entries.append({
                    "name": f"{mark.id}_data",
                    "source": source,
                    "transform": [agg],
                })
    return entries


def _scale_type(chart: ChartSpec, scale: ScaleDef) -> str:
    if scale.domain_kind == "discrete":
        return "ordinal" if scale.channel not in ("x", "y") else "band"
    if scale.is_aggregate:
        return "linear"
    if common.field_measure(chart, scale.field) == "temporal":
        return "time"
    return "linear"


def _scale_domain_data(chart: ChartSpec, views: list[ViewDef], scale: ScaleDef) -> dict[str, Any]:
    """Domain reference: aggregate scales read their mark's derived data."""
    for view in views:
        if scale not in view.scales:
            continue
        for mark in view.marks:
            for enc in mark.encodings.values():
                if enc.kind == "field" and enc.scale == scale.id:
                    if scale.is_aggregate:
                        return {
                            "data": f"{mark.id}_data",
                            "field": aggregate_output_name(scale.aggregate, enc.field),
                        }
                    return {"data": mark.dataset, "field": enc.field}
    # Unused by any mark: fall back to the first dataset.
    return {"data": chart.datasets[0].id if chart.datasets else "", "field": scale.field}


def _build_scales(chart: ChartSpec, domain_raw: dict[str, str]) -> list[dict[str, Any]]:
    out: list[dict[str, Any]] = []
    for view in chart.views:
        for scale in view.scales:
            stype = _scale_type(chart, scale)
            entry: dict[str, Any] = {
                "name": scale.id,
                "type": stype,
                "domain": _scale_domain_data(chart, list(chart.views), scale),
            }
            if scale.channel in ("x", "y"):
                entry["range"] = list(scale.range_extent)
                if stype == "band":
                    entry["padding"] = 0.1
                elif stype == "linear":
                    entry["nice"] = True
                    entry["zero"] = bool(scale.is_aggregate)
            elif scale.channel == "color":
                if stype == "ordinal":
                    entry["range"] = {"scheme": "category10"}
                else:
                    entry["range"] = {"scheme": "blues"}
            elif scale.channel == "size":
                entry["range"] = [30, 300]
            elif scale.channel == "opacity":
                entry["range"] = [0.3, 1]
            elif scale.channel == "shape":
                entry["type"] = "ordinal"
                entry["range"] = "symbol"
            if scale.id in domain_raw:
                entry["domainRaw"] = {"signal": domain_raw[scale.id]}
            out.append(entry)
    return out


def _encoding_value(view: ViewDef, enc: Encoding) -> dict[str, Any]:
    if enc.kind == "signal":
        return {"signal": enc.signal}
    if enc.kind == "constant":
        return {"value": enc.value}
    scale = view.scale(enc.scale)
    fname = (aggregate_output_name(scale.aggregate, enc.field)
             if scale.is_aggregate else enc.field)
    return {"scale": scale.id, "field": fname}


def _base_mark_encode(view: ViewDef, mark: MarkDef) -> dict[str, Any]:
    enc: dict[str, Any] = {}
    m = mark.encodings
    w, h = view.width, view.height
    mtype = mark.mark_type

    def put(channel: str, prop: str, default: Any = None) -> None:
        if channel in m:
            enc[prop] = _encoding_value(view, m[channel])
        elif default is not None:
            enc[prop] = {"value": default}

    x_scale = view.scale_for("x")
    y_scale = view.scale_for("y")

    if mtype == "symbol":
        put("x", "x", 0)
        put("y", "y", 0)
        put("size", "size", 60)
        put("color", "fill", SYMBOL_COLOR)
        put("shape", "shape")
        put("opacity", "opacity", 0.7)
    elif mtype == "rect":
        if x_scale is not None and x_scale.domain_kind == "discrete" and "x" in m:
            enc["x"] = _encoding_value(view, m["x"])
            enc["width"] = {"scale": x_scale.id, "band": 1}
        else:
            put("x", "x", 0)
            if "x" in m:
                enc["width"] = {"value": 5}
        if y_scale is not None and y_scale.domain_kind == "discrete" and "y" in m:
            enc["y"] = _encoding_value(view, m["y"])
            enc["height"] = {"scale": y_scale.id, "band": 1}
        elif "y" in m:
            enc["y"] = _encoding_value(view, m["y"])
            enc["y2"] = ({"scale": y_scale.id, "value": 0}
                         if y_scale is not None else {"value": h})
        if "x" in m and "y" not in m:
            enc.setdefault("y", {"value": 0})
            enc.setdefault("y2", {"value": h})
        if "y" in m and "x" not in m and "width" not in enc:
            enc.setdefault("x", {"value": 0})
            enc.setdefault("x2", {"scale": x_scale.id, "value": 0}
                           if x_scale is not None else {"value": w})
        put("color", "fill", SYMBOL_COLOR)
        put("opacity", "opacity")
    elif mtype == "line":
        put("x", "x", 0)
        put("y", "y", 0)
        put("color", "stroke", SYMBOL_COLOR)
        put("opacity", "opacity")
        enc["strokeWidth"] = {"value": 2}
    elif mtype == "area":
        put("x", "x", 0)
        put("y", "y", 0)
        enc["y2"] = ({"scale": y_scale.id, "value": 0}
                     if y_scale is not None else {"value": h})
        put("color", "fill", SYMBOL_COLOR)
        put("opacity", "opacity", 0.8)
    elif mtype == "text":
        put("x", "x", 0)
        put("y", "y", 0)
        put("color", "fill", "#333333")
        put("size", "fontSize", 11)
        put("opacity", "opacity")
        enc.setdefault("text", {"value": ""})
        enc["align"] = {"value": "center"}
        enc["baseline"] = {"value": "bottom"}
    elif mtype == "rule":
        if "y" in m and "x" not in m:
            put("y", "y")
            enc["x"] = {"value": 0}
            enc["x2"] = {"value": w}
        else:
            put("x", "x", 0)
            enc["y"] = {"value": 0}
            enc["y2"] = {"value": h}
        put("color", "stroke", "#666666")
        enc["strokeWidth"] = {"value": 1.5}
        put("opacity", "opacity")
    return enc


def _series_field(mark: MarkDef) -> str | None:
    """Field that splits a line/area mark into one path per series."""
    if mark.mark_type not in ("line", "area"):
        return None
    for channel in ("color", "shape", "opacity", "size"):
        enc = mark.encodings.get(channel)
        if enc is not None and enc.kind == "field":
            return enc.field
    return None


def _build_mark(chart: ChartSpec, view: ViewDef, mark: MarkDef,
                filtered_views: set[str], interactive: bool,
                conditionals: list[dict[str, Any]],
                binding_props: dict[str, Any]) -> dict[str, Any]:
    encode = _base_mark_encode(view, mark)
    for cond in conditionals:
        encode[cond["property"]] = cond["branches"]
    encode.update(binding_props)

    if mark.mark_type == "group":
        return {"type": "group", "name": mark.id, "interactive": interactive}

    vega_mark: dict[str, Any] = {
        "type": mark.mark_type,
        "name": mark.id,
        "interactive": interactive,
        "encode": {"update": encode},
    }
    data_name = _mark_data_name(view, mark, filtered_views)
    series = _series_field(mark)
    if data_name is not None and series is not None:
        facet_name = f"{mark.id}_facet"
        vega_mark["from"] = {"data": facet_name}
        return {
            "type": "group",
            "name": f"{mark.id}_series",
            "from": {"facet": {"name": facet_name, "data": data_name,
                               "groupby": [series]}},
            "marks": [vega_mark],
        }
    if data_name is not None:
        vega_mark["from"] = {"data": data_name}
    return vega_mark


def _build_axes(chart: ChartSpec, view: ViewDef) -> list[dict[str, Any]]:
    axes = []
    for scale in view.scales:
        if scale.channel not in ("x", "y"):
            continue
        title = (aggregate_output_name(scale.aggregate, scale.field)
                 if scale.is_aggregate else scale.field)
        axes.append({
            "orient": "bottom" if scale.channel == "x" else "left",
            "scale": scale.id,
            "title": title,
            "grid": scale.domain_kind == "continuous",
        })
    return axes


def _build_legends(view: ViewDef) -> list[dict[str, Any]]:
    legends = []
    used = {e.scale for m in view.marks for e in m.encodings.values() if e.kind == "field"}
    for scale in view.scales:
        if scale.id not in used:
            continue
        if scale.channel == "color":
            legends.append({"fill": scale.id, "title": scale.field})
        elif scale.channel == "size":
            legends.append({"size": scale.id, "title": scale.field})
    return legends


# ---------------------------------------------------------------------------
# Top-level assembly


def compile_vega(chart: ChartSpec, interactions: InteractionSet,
                 expressibility: list[dict[str, Any]] | None = None,
                 check_schema: bool = True) -> "CompiledSpec":
    """Lower a chart plus interactions to a schema-valid Vega v5 document.

    ``check_schema=False`` skips the internal self-check against the pinned
    schema (the output is identical either way); callers on hot paths may
    opt out once the compiler is trusted.
    """
    from . import CompiledSpec  # local import to avoid a cycle

    report = validate_set(chart, interactions)
    if not report.ok:
        first = report.violations[0]
        raise CompileError(
            f"interactions do not validate against the chart: {first.message}",
            ref=first.ref)

    offsets = view_offsets(chart)
    selections = {s.id: s for s in interactions.selections}

    # Filter predicates per target view.
    view_filters: dict[str, list[str]] = {v.id: [] for v in chart.views}
    for app in interactions.applications:
        if app.kind == "filter":
            sel = selections[app.selection]
            view_filters[app.target].append(common.selection_predicate(sel, chart))
    for widget in interactions.widgets:
        for app in widget.applications:
            if app.kind == "filter":
                view_filters[app.target].append(
                    common.widget_predicate_expr(widget, chart))
            elif app.kind in ("pan_zoom", "scale_domain"):
                raise CompileError(
                    f"widget {widget.id!r}: {app.kind} applications are not "
                    "supported from query widgets", ref=app.id)
    filtered_views = {v for v, preds in view_filters.items() if preds}

    # Conditional encodings per target mark.
    mark_conditionals: dict[str, list[dict[str, Any]]] = {}

    def add_conditional(mark_id: str, channel: str, predicate: str,
                        selected_value: Any, default_value: Any) -> None:
        view, mark = chart.mark(mark_id)
        prop = common.conditional_property(channel, mark.mark_type)
        enc = mark.encodings.get(channel)
        if selected_value is not None:
            selected: dict[str, Any] = {"value": selected_value}
        elif enc is not None and enc.kind == "field":
            selected = _encoding_value(view, enc)
        elif enc is not None and enc.kind == "constant":
            selected = {"value": enc.value}
        else:
            selected = {"value": common.SELECTED_DEFAULTS[channel]}
        default = {"value": default_value if default_value is not None
                   else common.UNSELECTED_DEFAULTS[channel]}
        selected = dict(selected)
        selected["test"] = predicate
        mark_conditionals.setdefault(mark_id, []).append(
            {"property": prop, "branches": [selected, default]})

    # Scale-domain overrides (scale_domain apps and pan/zoom).
    domain_raw: dict[str, str] = {}
    extra_signals: list[dict[str, Any]] = []

    for app in interactions.applications:
        sel = selections[app.selection]
        if app.kind == "conditional_encoding":
            add_conditional(app.target, app.channel,
                            common.selection_predicate(sel, chart),
                            app.selected_value, app.default_value)
        elif app.kind == "scale_domain":
            _, scale = chart.find_scale(app.target)
            axis = scale.channel if scale.channel in sel.projection else sel.projection[0]
            src_view = chart.view(sel.source_view)
            src_scale = src_view.scale_for(axis)
            from ..interactions import data_signal_base

            base = data_signal_base(src_scale.field)
            lo, hi = f"{sel.id}_{base}_start", f"{sel.id}_{base}_end"
            if common.field_measure(chart, src_scale.field) == "temporal":
                lo, hi = f"time({lo})", f"time({hi})"
            expr = (f"{sel.id}_{axis}_start === {sel.id}_{axis}_end ? null : "
                    f"[min({lo}, {hi}), max({lo}, {hi})]")
            sig_name = f"{scale.id}_domain"
            extra_signals.append({"name": sig_name, "update": expr})
            if scale.id in domain_raw:
                raise CompileError(
                    f"scale {scale.id!r} receives more than one domain override")
            domain_raw[scale.id] = sig_name
    for widget in interactions.widgets:
        for app in widget.applications:
            if app.kind == "conditional_encoding":
                add_conditional(app.target, app.channel,
                                common.widget_predicate_expr(widget, chart),
                                app.selected_value, app.default_value)

    for app in interactions.applications:
        if app.kind != "pan_zoom":
            continue
        view = chart.view(app.target)
        scales = [chart.find_scale(sid)[1] for sid in app.scales]
        pz_signals, pz_domains = _pan_zoom_signals(chart, view, scales)
        extra_signals.extend(pz_signals)
        for scale_id, sig in pz_domains.items():
            if scale_id in domain_raw:
                raise CompileError(
                    f"scale {scale_id!r} receives more than one domain override")
            domain_raw[scale_id] = sig

    # Selection signals, stores, brush rectangles.
    selection_signals: list[dict[str, Any]] = []
    store_data: list[dict[str, Any]] = []
    brush_rects: dict[str, list[dict[str, Any]]] = {}
    point_targets: set[str] = set()
    for sel in interactions.selections:
        selection_signals.extend(lower_selection(sel, chart))
        store_data.extend(_selection_data(sel, chart))
        apps = interactions.applications_for(sel.id)
        has_visible = any(a.kind != "pan_zoom" for a in apps) or any(
            b.signal.startswith(sel.id + "_") for b in interactions.bindings)
        if sel.kind == "interval" and has_visible:
            brush_rects.setdefault(sel.source_view, []).append(_brush_rect(sel, chart))
        if sel.kind == "point":
            view = chart.view(sel.source_view)
            point_targets.update(m.id for m in _point_target_marks(chart, view))

    # Signal bindings override mark properties.
    descriptor_index: dict[str, SignalDescriptor] = {}
    for sel in interactions.selections:
        for desc in enumerate_signals(sel, chart):
            descriptor_index[desc.name] = desc
    mark_binding_props: dict[str, dict[str, Any]] = {}

    for binding in interactions.bindings:
        desc = descriptor_index.get(binding.signal)
        if desc is None:
            raise CompileError(f"binding references unknown signal {binding.signal!r}",
                               ref=binding.signal)
        target_view, _mark = chart.mark(binding.mark)
        if binding.property == "text":
            value: dict[str, Any] = {"signal": binding.signal}
            prop = "text"
        elif binding.property in ("x", "y"):
            prop = binding.property
            if desc.space == "pixel":
                value = {"signal": binding.signal}
            else:
                axis_scale = target_view.scale_for(binding.property)
                if axis_scale is None:
                    raise CompileError(
                        f"binding {binding.signal!r} -> {binding.mark}.{prop}: "
                        f"the target view has no {prop}-scale", ref=binding.mark)
                value = {"scale": axis_scale.id, "signal": binding.signal}
        else:
            prop = binding.property
            value = {"signal": binding.signal}
        mark_binding_props.setdefault(binding.mark, {})[prop] = value

    # Widgets.
    widget_signals: list[dict[str, Any]] = []
    for widget in interactions.widgets:
        widget_signals.extend(_widget_signals(widget, chart))

    # Assemble the document.
    groups: list[dict[str, Any]] = []
    for view in chart.views:
        ox, oy = offsets[view.id]
        marks = [
            _build_mark(chart, view, m, filtered_views,
                        interactive=m.id in point_targets,
                        conditionals=mark_conditionals.get(m.id, []),
                        binding_props=mark_binding_props.get(m.id, {}))
            for m in view.marks
        ]
        marks.extend(brush_rects.get(view.id, []))
        group: dict[str, Any] = {
            "type": "group",
            "name": view_group_name(view.id),
            "encode": {"update": {
                "x": {"value": ox},
                "y": {"value": oy},
                "width": {"value": view.width},
                "height": {"value": view.height},
                "fill": {"value": "transparent"},
            }},
            "marks": marks,
        }
        axes = _build_axes(chart, view)
        if axes:
            group["axes"] = axes
        legends = _build_legends(view)
        if legends:
            group["legends"] = legends
        groups.append(group)

    total_w = max((v.width for v in chart.views), default=0)
    last = chart.views[-1]
    total_h = offsets[last.id][1] + last.height

    doc: dict[str, Any] = {
        "$schema": SCHEMA_URLS[VEGA],
        "width": total_w,
        "height": total_h,
        "padding": 5,
        "background": "white",
        "data": _build_data(chart, view_filters) + store_data,
        "signals": selection_signals + extra_signals + widget_signals,
        "scales": _build_scales(chart, domain_raw),
        "marks": groups,
    }
    if not doc["signals"]:
        del doc["signals"]

    _check_name_agreement(doc, chart, interactions)
    if check_schema:
        errors = structural_errors(doc, VEGA)
        if errors:
            raise CompileError("emitted Vega document is schema-invalid: "
                               + "; ".join(errors))
    return CompiledSpec(target=VEGA, document=doc,
                        expressibility=list(expressibility or []))


def _check_name_agreement(doc: dict[str, Any], chart: ChartSpec,
                          interactions: InteractionSet) -> None:
    """Each selection's signal cluster must match enumerate_signals exactly."""
    doc_names = [s["name"] for s in doc.get("signals", [])]
    if len(doc_names) != len(set(doc_names)):
        raise CompileError("duplicate signal definitions in compiled document")
    doc_set = set(doc_names)
    for sel in interactions.selections:
        expected = {d.name for d in enumerate_signals(sel, chart)}
        actual = {n for n in doc_set if n.startswith(sel.id + "_")}
        if actual != expected:
            raise CompileError(
                f"signal names for selection {sel.id!r} diverge from the "
                f"enumeration: extra={sorted(actual - expected)}, "
                f"missing={sorted(expected - actual)}")

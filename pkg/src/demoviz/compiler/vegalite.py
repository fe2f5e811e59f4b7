"""Lowering to Vega-Lite (v4) documents.

Vega-Lite is the preferred target but cannot express everything the
interaction model can: direct signal bindings and widget comparators other
than equality force the Vega target. :func:`is_expressible_vegalite`
reports every blocking feature; :func:`compile_vegalite` refuses to run
unless the report is empty.
"""

from __future__ import annotations

from typing import Any

from ..chart import ChartSpec, Encoding, MarkDef, ViewDef
from ..errors import CompileError, NotExpressible
from ..interactions import InteractionSet, QueryWidget, Selection, validate_set
from . import common
from .schemas import SCHEMA_URLS, VEGA_LITE, structural_errors

VL_MARK_TYPES = {
    "symbol": "point",
    "rect": "bar",
    "line": "line",
    "area": "area",
    "text": "text",
    "rule": "rule",
}

VL_TYPE_BY_MEASURE = {
    "nominal": "nominal",
    "ordinal": "ordinal",
    "quantitative": "quantitative",
    "temporal": "temporal",
}


def is_expressible_vegalite(interactions: InteractionSet,
                            chart: ChartSpec | None = None) -> list[dict[str, Any]]:
    """Report every feature that blocks the Vega-Lite target (empty = ok)."""
    report: list[dict[str, Any]] = []
    for binding in interactions.bindings:
        report.append({
            "code": "SignalBinding",
            "ref": binding.signal,
            "message": f"signal {binding.signal!r} is bound to "
                       f"{binding.mark}.{binding.property}; Vega-Lite cannot "
                       "encode signal values directly",
        })
    for widget in interactions.widgets:
        if widget.comparator != "==":
            report.append({
                "code": "InequalityComparator",
                "ref": widget.id,
                "message": f"widget {widget.id!r} compares with "
                           f"{widget.comparator!r}; Vega-Lite query widgets "
                           "only populate equality selections",
            })
    if chart is not None:
        for view in chart.views:
            for mark in view.marks:
                if mark.mark_type not in VL_MARK_TYPES:
                    report.append({
                        "code": "UnsupportedMark",
                        "ref": mark.id,
                        "message": f"mark {mark.id!r} has type "
                                   f"{mark.mark_type!r}, which Vega-Lite "
                                   "cannot express",
                    })
                for channel, enc in mark.encodings.items():
                    if enc.kind == "signal":
                        report.append({
                            "code": "SignalEncoding",
                            "ref": mark.id,
                            "message": f"mark {mark.id!r} encodes {channel!r} "
                                       "from a signal; Vega-Lite has no signal "
                                       "references",
                        })
    return report


def _vl_field_encoding(chart: ChartSpec, view: ViewDef, enc: Encoding) -> dict[str, Any]:
    scale = view.scale(enc.scale)
    if scale.is_aggregate:
        out: dict[str, Any] = {"aggregate": scale.aggregate, "type": "quantitative"}
        if scale.aggregate != "count":
            out["field"] = enc.field
        return out
    measure = common.field_measure(chart, enc.field)
    return {"field": enc.field, "type": VL_TYPE_BY_MEASURE[measure]}


def _vl_selection_def(sel: Selection, bind_scales: bool = False) -> dict[str, Any]:
    if sel.kind == "interval":
        out: dict[str, Any] = {"type": "interval",
                               "encodings": list(sel.projection)}
        if bind_scales:
            out["bind"] = "scales"
        return out
    out = {"type": "multi" if sel.cardinality == "multi" else "single"}
    if sel.projection:
        out["fields"] = list(sel.projection)
    if sel.event_source == "hover":
        out["on"] = "mouseover"
    return out


def _vl_widget_selection(widget: QueryWidget, chart: ChartSpec) -> dict[str, Any]:
    bind: dict[str, Any]
    if widget.widget_kind in ("radio", "select"):
        bind = {"input": widget.widget_kind,
                "options": common.widget_options(chart, widget)}
    elif widget.widget_kind == "text":
        bind = {"input": "text"}
    else:
        lo, hi = common.widget_extent(chart, widget)
        bind = {"input": "range", "min": lo, "max": hi,
                "step": (hi - lo) / 100 if hi > lo else 1}
    return {"type": "single", "fields": [widget.field], "bind": bind}


def compile_vegalite(chart: ChartSpec, interactions: InteractionSet,
                     check_schema: bool = True) -> "CompiledSpec":
    """Lower to a schema-valid Vega-Lite v4 document.

    Precondition: :func:`is_expressible_vegalite` returns an empty report;
    otherwise NotExpressible carries the report. ``check_schema`` as in
    :func:`compile_vega`.
    """
    from . import CompiledSpec

    blockers = is_expressible_vegalite(interactions, chart)
    if blockers:
        raise NotExpressible("the interaction model requires the Vega target",
                             blockers)
    report = validate_set(chart, interactions)
    if not report.ok:
        first = report.violations[0]
        raise CompileError(
            f"interactions do not validate against the chart: {first.message}",
            ref=first.ref)

    selections = {s.id: s for s in interactions.selections}

    # Per-view collections.
    view_selections: dict[str, dict[str, Any]] = {v.id: {} for v in chart.views}
    view_filters: dict[str, list[dict[str, Any]]] = {v.id: [] for v in chart.views}
    conditionals: dict[str, list[tuple[str, str, Any, Any]]] = {}
    scale_domains: dict[str, tuple[str, str]] = {}

    pan_zoom_by_sel: dict[str, bool] = {}
    other_apps_by_sel: dict[str, bool] = {}
    for app in interactions.applications:
        if app.kind == "pan_zoom":
            pan_zoom_by_sel[app.selection] = True
        else:
            other_apps_by_sel[app.selection] = True

    for sel in interactions.selections:
        bind_scales = pan_zoom_by_sel.get(sel.id, False) and not other_apps_by_sel.get(sel.id, False)
        view_selections[sel.source_view][sel.id] = _vl_selection_def(sel, bind_scales)

    for app in interactions.applications:
        sel = selections[app.selection]
        if app.kind == "conditional_encoding":
            conditionals.setdefault(app.target, []).append(
                (sel.id, app.channel, app.selected_value, app.default_value))
        elif app.kind == "filter":
            view_filters[app.target].append({"filter": {"selection": sel.id}})
        elif app.kind == "scale_domain":
            view_of_scale, scale = chart.find_scale(app.target)
            axis = scale.channel if scale.channel in sel.projection else sel.projection[0]
            scale_domains[scale.id] = (sel.id, axis)
        elif app.kind == "pan_zoom":
            if other_apps_by_sel.get(app.selection):
                # The selection drives other applications too; emit a
                # dedicated scale-bound companion selection.
                view_selections[sel.source_view][f"{sel.id}_scales"] = \
                    _vl_selection_def(sel, bind_scales=True)

    for widget in interactions.widgets:
        target_views = [a.target for a in widget.applications if a.kind == "filter"]
        host = target_views[0] if target_views else chart.views[0].id
        if widget.applications and widget.applications[0].kind == "conditional_encoding":
            host = chart.mark(widget.applications[0].target)[0].id
        view_selections[host][widget.id] = _vl_widget_selection(widget, chart)
        for app in widget.applications:
            if app.kind == "filter":
                view_filters[app.target].append({"filter": {"selection": widget.id}})
            elif app.kind == "conditional_encoding":
                conditionals.setdefault(app.target, []).append(
                    (widget.id, app.channel, app.selected_value, app.default_value))
            else:
                raise CompileError(
                    f"widget {widget.id!r}: {app.kind} applications are not "
                    "supported from query widgets", ref=app.id)

    def mark_layer(view: ViewDef, mark: MarkDef, carry_selections: bool,
                   carry_domains: bool) -> dict[str, Any]:
        if mark.mark_type not in VL_MARK_TYPES:
            raise CompileError(
                f"mark {mark.id!r}: type {mark.mark_type!r} has no Vega-Lite "
                "equivalent", ref=mark.id)
        encoding: dict[str, Any] = {}
        for channel, enc in mark.encodings.items():
            if enc.kind == "constant":
                encoding[channel] = {"value": enc.value}
            else:
                encoding[channel] = _vl_field_encoding(chart, view, enc)
        if carry_domains:
            for scale_id, (sel_id, axis) in scale_domains.items():
                if any(s.id == scale_id for s in view.scales):
                    _, scale = chart.find_scale(scale_id)
                    spec = encoding.get(scale.channel)
                    if spec is None:
                        raise CompileError(
                            f"scale {scale_id!r} is not encoded by mark {mark.id!r}")
                    spec["scale"] = {"domain": {"selection": sel_id,
                                                "encoding": axis}}
        for sel_id, channel, selected_value, default_value in conditionals.get(mark.id, []):
            base = encoding.get(channel)
            condition: dict[str, Any]
            if selected_value is not None:
                condition = {"selection": sel_id, "value": selected_value}
            elif base is not None and ("field" in base or "aggregate" in base):
                condition = {"selection": sel_id, **base}
            else:
                condition = {"selection": sel_id,
                             "value": common.SELECTED_DEFAULTS[channel]}
            default = (default_value if default_value is not None
                       else common.UNSELECTED_DEFAULTS[channel])
            encoding[channel] = {"condition": condition, "value": default}

        layer: dict[str, Any] = {
            "data": {"name": mark.dataset},
            "mark": {"type": VL_MARK_TYPES[mark.mark_type]},
        }
        if carry_selections and view_selections[view.id]:
            layer["selection"] = view_selections[view.id]
        if encoding:
            layer["encoding"] = encoding
        return layer

    def unit_for_view(view: ViewDef) -> dict[str, Any]:
        if not view.marks:
            raise CompileError(
                f"view {view.id!r} has no marks; the Vega-Lite target needs "
                "at least one", ref=view.id)
        # Selections live on the first layer; shared layer scales mean the
        # domain override belongs to the first layer that encodes the channel.
        layers = [
            mark_layer(view, mark, carry_selections=(i == 0),
                       carry_domains=(i == 0))
            for i, mark in enumerate(view.marks)
        ]
        unit: dict[str, Any] = {"width": view.width, "height": view.height}
        if view_filters[view.id]:
            unit["transform"] = view_filters[view.id]
        if len(layers) == 1:
            unit.update(layers[0])
        else:
            unit["layer"] = layers
        return unit

    datasets = {t.id: [dict(r) for r in t.rows] for t in chart.datasets}
    units = [unit_for_view(v) for v in chart.views]
    doc: dict[str, Any] = {"$schema": SCHEMA_URLS[VEGA_LITE], "datasets": datasets}
    if len(units) == 1:
        unit = units[0]
        doc.update(unit)
    else:
        doc["vconcat"] = units

    if check_schema:
        errors = structural_errors(doc, VEGA_LITE)
        if errors:
            raise CompileError("emitted Vega-Lite document is schema-invalid: "
                               + "; ".join(errors))
    return CompiledSpec(target=VEGA_LITE, document=doc, expressibility=[])

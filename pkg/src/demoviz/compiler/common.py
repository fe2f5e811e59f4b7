"""Lowering helpers shared by both compile targets.

Builds the Vega expression strings for selection predicates, scale
inversion, and widget comparators, and fixes the constants used when a
conditional encoding has no explicit selected/default values.
"""

from __future__ import annotations

from typing import Any

from ..chart import ChartSpec, FieldDef, parse_iso_date, parse_number
from ..errors import CompileError
from ..interactions import QueryWidget, Selection, data_signal_base, point_fields

#: Constants applied when a conditional encoding does not specify values.
SELECTED_DEFAULTS: dict[str, Any] = {"color": "steelblue", "opacity": 1, "size": 200}
UNSELECTED_DEFAULTS: dict[str, Any] = {"color": "lightgray", "opacity": 0.2, "size": 30}


def color_property(mark_type: str) -> str:
    """The scenegraph property a color encoding drives for this mark type."""
    return "stroke" if mark_type in ("line", "rule") else "fill"


def conditional_property(channel: str, mark_type: str) -> str:
    return color_property(mark_type) if channel == "color" else channel


def field_measure(chart: ChartSpec, field_name: str) -> str:
    return chart.field_anywhere(field_name).measure_type


def datum_expr(f: FieldDef) -> str:
    if f.measure_type == "temporal":
        return f"time(datum['{f.name}'])"
    return f"datum['{f.name}']"


def point_key_fields(sel: Selection, chart: ChartSpec) -> list[FieldDef]:
    """The fields that decide membership for a point selection."""
    view = chart.view(sel.source_view)
    fields = point_fields(chart, view)
    if sel.projection:
        by_name = {f.name: f for f in fields}
        return [by_name[n] for n in sel.projection if n in by_name]
    return list(fields)


def _value_signal_expr(sel: Selection, f: FieldDef) -> str:
    name = f"{sel.id}_{f.name}_value"
    return f"time({name})" if f.measure_type == "temporal" else name


def point_key_expr_datum(sel: Selection, chart: ChartSpec) -> str:
    keys = point_key_fields(sel, chart)
    return " + '|' + ".join(f"toString({datum_expr(f)})" for f in keys)


def point_key_expr_signals(sel: Selection, chart: ChartSpec) -> str:
    keys = point_key_fields(sel, chart)
    return " + '|' + ".join(f"toString({_value_signal_expr(sel, f)})" for f in keys)


def point_store_name(sel: Selection) -> str:
    return f"{sel.id}_store"


def point_predicate(sel: Selection, chart: ChartSpec) -> str:
    """Membership test for one datum against a point selection.

    Empty selections (nothing clicked yet) select everything, matching the
    usual conditional-encoding convention.
    """
    keys = point_key_fields(sel, chart)
    if not keys:
        return "true"
    if sel.cardinality == "multi":
        store = point_store_name(sel)
        return (f"length(data('{store}')) === 0 || "
                f"indata('{store}', 'key', {point_key_expr_datum(sel, chart)})")
    guard = f"!isValid({sel.id}_{keys[0].name}_value)"
    eqs = " && ".join(
        f"{datum_expr(f)} === {_value_signal_expr(sel, f)}" for f in keys)
    return f"{guard} || ({eqs})"


def interval_predicate(sel: Selection, chart: ChartSpec) -> str:
    """Membership test for one datum against an interval selection.

    A zero-extent brush (all projected axes collapsed) selects everything.
    Discrete axes compare band indices; continuous axes compare values with
    direction-insensitive bounds.
    """
    view = chart.view(sel.source_view)
    empty_terms: list[str] = []
    range_terms: list[str] = []
    for axis in sel.projection:
        empty_terms.append(f"{sel.id}_{axis}_start === {sel.id}_{axis}_end")
        scale = view.scale_for(axis)
        if scale is None:
            raise CompileError(
                f"selection {sel.id!r} projects axis {axis!r} with no scale")
        fname = scale.field
        base = data_signal_base(fname)
        lo, hi = f"{sel.id}_{base}_start", f"{sel.id}_{base}_end"
        if scale.domain_kind == "discrete":
            dom = f"domain('{scale.id}')"
            idx = f"indexof({dom}, datum['{fname}'])"
            ilo, ihi = f"indexof({dom}, {lo})", f"indexof({dom}, {hi})"
            range_terms.append(
                f"inrange({idx}, [min({ilo}, {ihi}), max({ilo}, {ihi})])")
        elif field_measure(chart, fname) == "temporal":
            range_terms.append(
                f"inrange(time(datum['{fname}']), "
                f"[min(time({lo}), time({hi})), max(time({lo}), time({hi}))])")
        else:
            range_terms.append(
                f"inrange(datum['{fname}'], [min({lo}, {hi}), max({lo}, {hi})])")
    return f"({' && '.join(empty_terms)}) || ({' && '.join(range_terms)})"


def selection_predicate(sel: Selection, chart: ChartSpec) -> str:
    if sel.kind == "interval":
        return interval_predicate(sel, chart)
    return point_predicate(sel, chart)


def invert_expr(scale_id: str, domain_kind: str, pixel_expr: str) -> str:
    """Pixel-to-data inversion; discrete scales map to the covering band."""
    if domain_kind == "discrete":
        dom = f"domain('{scale_id}')"
        return (f"{dom}[clamp(floor({pixel_expr} / bandwidth('{scale_id}')), "
                f"0, length({dom}) - 1)]")
    return f"invert('{scale_id}', {pixel_expr})"


# ---------------------------------------------------------------------------
# Widget helpers


def widget_signal_name(widget: QueryWidget) -> str:
    return f"{widget.id}_value"


def _temporal_ms(value: Any) -> float | None:
    d = parse_iso_date(value)
    if d is None:
        return None
    return d.timestamp() * 1000.0


def widget_field_column(chart: ChartSpec, widget: QueryWidget) -> list[Any]:
    for table in chart.datasets:
        if any(f.name == widget.field for f in table.fields):
            return table.column(widget.field)
    return []


def widget_options(chart: ChartSpec, widget: QueryWidget) -> list[Any]:
    """Distinct values for radio/select widgets, stably sorted."""
    values = [v for v in widget_field_column(chart, widget) if v is not None]
    distinct = sorted(set(values), key=lambda v: (str(type(v)), str(v)))
    return [None] + distinct


def widget_extent(chart: ChartSpec, widget: QueryWidget) -> tuple[float, float]:
    """Numeric [min, max] of the bound column (temporal as epoch ms)."""
    fdef = chart.field_anywhere(widget.field)
    nums: list[float] = []
    for v in widget_field_column(chart, widget):
        if v is None:
            continue
        n = _temporal_ms(v) if fdef.measure_type == "temporal" else parse_number(v)
        if n is not None:
            nums.append(n)
    if not nums:
        raise CompileError(
            f"widget {widget.id!r}: field {widget.field!r} has no usable extent")
    return min(nums), max(nums)


def widget_predicate_expr(widget: QueryWidget, chart: ChartSpec) -> str:
    """Vega expression testing one datum against the widget's comparator."""
    fdef = chart.field_anywhere(widget.field)
    temporal = fdef.measure_type == "temporal"
    d = f"time(datum['{widget.field}'])" if temporal else f"datum['{widget.field}']"

    def sig(name: str) -> str:
        return f"time(toDate({name}))" if temporal else name

    if widget.comparator == "between":
        lo, hi = f"{widget.id}_lo", f"{widget.id}_hi"
        return f"{d} >= {sig(lo)} && {d} <= {sig(hi)}"
    value = widget_signal_name(widget)
    op = {"==": "==", "!=": "!="}.get(widget.comparator, widget.comparator)
    return f"!isValid({value}) || {d} {op} {sig(value)}"

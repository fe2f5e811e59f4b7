"""Abstract interaction primitives and their validation.

Selections capture *which* records an input gesture picks out, applications
capture *what* a selection does to the chart, query widgets bind input
controls to data fields with a comparator, and signal descriptors name the
dynamic values a selection exposes. An interaction document groups all four
plus signal bindings; :func:`validate_interaction` checks one assembled
interaction against a chart and returns a report instead of raising.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Mapping, Sequence

from .chart import (
    ChartSpec,
    FieldDef,
    ViewDef,
    backing_fields,
    parse_iso_date,
    parse_number,
)
from .errors import CompileError, ParseError, TypeMismatch

INTERACTION_FORMAT_VERSION = 1

SELECTION_KINDS = ("point", "interval")
EVENT_SOURCES = ("click", "hover", "drag")
CARDINALITIES = ("single", "multi")
APPLICATION_KINDS = ("conditional_encoding", "filter", "pan_zoom", "scale_domain")
CONDITIONAL_CHANNELS = ("color", "opacity", "size")
WIDGET_KINDS = ("radio", "select", "range", "text")
COMPARATORS = ("==", "!=", "<", "<=", ">", ">=", "between")
BINDABLE_PROPERTIES = ("x", "y", "text", "size", "opacity")

#: Mark properties a pixel-space signal may drive.
PIXEL_BINDABLE = ("x", "y", "size")
#: Mark properties a data-space signal may drive (spatial ones via a scale).
DATA_BINDABLE = ("text", "x", "y")


@dataclass(frozen=True)
class Selection:
    id: str
    kind: str  # "point" | "interval"
    event_source: str  # "click" | "hover" | "drag"
    source_view: str
    cardinality: str | None = None  # point only
    projection: tuple[str, ...] = ()  # fields (point) or axes (interval)

    def to_dict(self) -> dict[str, Any]:
        d: dict[str, Any] = {
            "id": self.id,
            "kind": self.kind,
            "on": self.event_source,
            "view": self.source_view,
            "projection": list(self.projection),
        }
        if self.cardinality is not None:
            d["cardinality"] = self.cardinality
        return d


@dataclass(frozen=True)
class Application:
    id: str
    kind: str
    target: str
    selection: str | None = None  # None when owned by a query widget
    channel: str | None = None  # conditional_encoding
    selected_value: Any = None
    default_value: Any = None
    scales: tuple[str, ...] = ()  # pan_zoom
    self_filter: bool = False

    def to_dict(self) -> dict[str, Any]:
        d: dict[str, Any] = {"id": self.id, "kind": self.kind, "target": self.target}
        if self.selection is not None:
            d["selection"] = self.selection
        if self.channel is not None:
            d["channel"] = self.channel
        if self.selected_value is not None:
            d["selectedValue"] = self.selected_value
        if self.default_value is not None:
            d["defaultValue"] = self.default_value
        if self.scales:
            d["scales"] = list(self.scales)
        if self.self_filter:
            d["selfFilter"] = True
        return d


@dataclass(frozen=True)
class QueryWidget:
    id: str
    field: str
    widget_kind: str
    comparator: str
    applications: tuple[Application, ...] = ()

    def to_dict(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "field": self.field,
            "widgetKind": self.widget_kind,
            "comparator": self.comparator,
            "applications": [a.to_dict() for a in self.applications],
        }


@dataclass(frozen=True)
class SignalDescriptor:
    name: str
    space: str  # "pixel" | "data"
    role: str  # "start" | "end" | "value" | "mouse_x" | "mouse_y"
    selection: str
    field: str | None = None
    axis: str | None = None  # "x" | "y" for extent and mouse signals

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "space": self.space,
            "role": self.role,
            "selection": self.selection,
            "field": self.field,
            "axis": self.axis,
        }


@dataclass(frozen=True)
class SignalBinding:
    signal: str
    mark: str
    property: str

    def to_dict(self) -> dict[str, Any]:
        return {"signal": self.signal, "mark": self.mark, "property": self.property}


@dataclass(frozen=True)
class InteractionDef:
    """One accepted design: a selection with its effects, or a widget."""

    selection: Selection | None = None
    applications: tuple[Application, ...] = ()
    bindings: tuple[SignalBinding, ...] = ()
    widget: QueryWidget | None = None


@dataclass(frozen=True)
class InteractionSet:
    """Decoded interaction document (selections + applications + widgets + bindings)."""

    selections: tuple[Selection, ...] = ()
    applications: tuple[Application, ...] = ()
    widgets: tuple[QueryWidget, ...] = ()
    bindings: tuple[SignalBinding, ...] = ()

    def selection(self, sid: str) -> Selection | None:
        for s in self.selections:
            if s.id == sid:
                return s
        return None

    def applications_for(self, sid: str) -> tuple[Application, ...]:
        return tuple(a for a in self.applications if a.selection == sid)

    def interaction_defs(self, chart: ChartSpec) -> list[InteractionDef]:
        """Group the flat document into per-selection / per-widget definitions.

        A binding belongs to the selection whose signal namespace contains
        its signal name; orphan bindings go to the first definition so they
        still surface via validation.
        """
        defs: list[InteractionDef] = []
        claimed: set[int] = set()
        for sel in self.selections:
            names = _signal_namespace(sel)
            bound = []
            for i, b in enumerate(self.bindings):
                if i not in claimed and b.signal.startswith(names):
                    claimed.add(i)
                    bound.append(b)
            defs.append(InteractionDef(
                selection=sel,
                applications=self.applications_for(sel.id),
                bindings=tuple(bound),
            ))
        orphans = tuple(b for i, b in enumerate(self.bindings) if i not in claimed)
        if orphans:
            if defs:
                first = defs[0]
                defs[0] = InteractionDef(
                    selection=first.selection,
                    applications=first.applications,
                    bindings=first.bindings + orphans,
                )
            else:
                defs.append(InteractionDef(bindings=orphans))
        for w in self.widgets:
            defs.append(InteractionDef(widget=w))
        return defs

    def to_dict(self) -> dict[str, Any]:
        return {
            "version": INTERACTION_FORMAT_VERSION,
            "selections": [s.to_dict() for s in self.selections],
            "applications": [a.to_dict() for a in self.applications],
            "widgets": [w.to_dict() for w in self.widgets],
            "bindings": [b.to_dict() for b in self.bindings],
        }


def _signal_namespace(sel: Selection) -> str:
    return sel.id + "_"


# ---------------------------------------------------------------------------
# Parsing


def _req(cond: bool, message: str, ref: str | None = None) -> None:
    if not cond:
        raise ParseError(message, ref=ref)


def _parse_selection(obj: Any) -> Selection:
    _req(isinstance(obj, dict), "selections must be objects")
    sid = obj.get("id")
    _req(isinstance(sid, str) and bool(sid), "selection needs a string id")
    kind = obj.get("kind")
    _req(kind in SELECTION_KINDS, f"selection {sid!r}: unknown kind {kind!r}")
    source = obj.get("on")
    _req(source in EVENT_SOURCES, f"selection {sid!r}: unknown event source {source!r}")
    view = obj.get("view")
    _req(isinstance(view, str), f"selection {sid!r}: needs a source view")
    projection = tuple(obj.get("projection", ()))
    cardinality = obj.get("cardinality")

    if kind == "interval":
        _req(source == "drag", f"selection {sid!r}: interval selections respond to drags")
        _req(cardinality is None, f"selection {sid!r}: cardinality is point-only")
        _req(len(projection) > 0, f"selection {sid!r}: interval projection must be non-empty")
        _req(set(projection) <= {"x", "y"},
             f"selection {sid!r}: interval projection axes must be x and/or y")
        projection = tuple(a for a in ("x", "y") if a in projection)
    else:
        _req(source in ("click", "hover"),
             f"selection {sid!r}: point selections respond to clicks or hovers")
        cardinality = cardinality or "single"
        _req(cardinality in CARDINALITIES,
             f"selection {sid!r}: unknown cardinality {cardinality!r}")
        _req(all(isinstance(f, str) for f in projection),
             f"selection {sid!r}: point projection must list field names")
    return Selection(id=sid, kind=kind, event_source=source, source_view=view,
                     cardinality=cardinality, projection=projection)


def _parse_application(obj: Any, *, owned_by_widget: bool = False) -> Application:
    _req(isinstance(obj, dict), "applications must be objects")
    aid = obj.get("id")
    _req(isinstance(aid, str) and bool(aid), "application needs a string id")
    kind = obj.get("kind")
    _req(kind in APPLICATION_KINDS, f"application {aid!r}: unknown kind {kind!r}")
    target = obj.get("target")
    _req(isinstance(target, str), f"application {aid!r}: needs a target id")
    selection = obj.get("selection")
    if owned_by_widget:
        _req(selection is None,
             f"application {aid!r}: widget applications name no selection")
    else:
        _req(isinstance(selection, str),
             f"application {aid!r}: needs a selection reference")
    channel = obj.get("channel")
    if kind == "conditional_encoding":
        _req(channel in CONDITIONAL_CHANNELS,
             f"application {aid!r}: conditional channel must be one of "
             f"{', '.join(CONDITIONAL_CHANNELS)}")
    else:
        _req(channel is None, f"application {aid!r}: channel is conditional-only")
    scales = tuple(obj.get("scales", ()))
    if kind == "pan_zoom":
        _req(len(scales) > 0 and all(isinstance(s, str) for s in scales),
             f"application {aid!r}: pan_zoom needs a list of target scales")
    else:
        _req(not scales, f"application {aid!r}: scales is pan_zoom-only")
    return Application(
        id=aid, kind=kind, target=target, selection=selection, channel=channel,
        selected_value=obj.get("selectedValue"), default_value=obj.get("defaultValue"),
        scales=scales, self_filter=bool(obj.get("selfFilter", False)),
    )


def _parse_widget(obj: Any) -> QueryWidget:
    _req(isinstance(obj, dict), "widgets must be objects")
    wid = obj.get("id")
    _req(isinstance(wid, str) and bool(wid), "widget needs a string id")
    fieldname = obj.get("field")
    _req(isinstance(fieldname, str), f"widget {wid!r}: needs a field name")
    widget_kind = obj.get("widgetKind")
    _req(widget_kind in WIDGET_KINDS, f"widget {wid!r}: unknown kind {widget_kind!r}")
    comparator = obj.get("comparator", "==")
    _req(comparator in COMPARATORS, f"widget {wid!r}: unknown comparator {comparator!r}")
    _req(comparator != "between" or widget_kind == "range",
         f"widget {wid!r}: between requires a range widget")
    apps = tuple(_parse_application(a, owned_by_widget=True)
                 for a in obj.get("applications", ()))
    return QueryWidget(id=wid, field=fieldname, widget_kind=widget_kind,
                       comparator=comparator, applications=apps)


def _parse_binding(obj: Any) -> SignalBinding:
    _req(isinstance(obj, dict), "bindings must be objects")
    signal = obj.get("signal")
    mark = obj.get("mark")
    prop = obj.get("property")
    _req(isinstance(signal, str) and bool(signal), "binding needs a signal name")
    _req(isinstance(mark, str) and bool(mark), "binding needs a target mark")
    _req(prop in BINDABLE_PROPERTIES, f"binding property must be one of "
         f"{', '.join(BINDABLE_PROPERTIES)}, got {prop!r}")
    return SignalBinding(signal=signal, mark=mark, property=prop)


def parse_interactions(document: str | Mapping[str, Any]) -> InteractionSet:
    """Parse an interaction document; structural invariants raise ParseError."""
    if isinstance(document, str):
        try:
            raw = json.loads(document)
        except json.JSONDecodeError as exc:
            raise ParseError(f"interaction document is not valid JSON: {exc}")
    else:
        raw = document
    _req(isinstance(raw, dict), "interaction document must be a JSON object")
    version = raw.get("version")
    _req(version == INTERACTION_FORMAT_VERSION,
         f"unsupported interaction format version {version!r}")

    selections = tuple(_parse_selection(s) for s in raw.get("selections", ()))
    applications = tuple(_parse_application(a) for a in raw.get("applications", ()))
    widgets = tuple(_parse_widget(w) for w in raw.get("widgets", ()))
    bindings = tuple(_parse_binding(b) for b in raw.get("bindings", ()))

    ids = [s.id for s in selections] + [a.id for a in applications] + [w.id for w in widgets]
    dupes = {i for i in ids if ids.count(i) > 1}
    _req(not dupes, f"duplicate interaction ids: {sorted(dupes)}")
    # Selection ids must be prefix-free so signal namespaces never overlap.
    sel_ids = [s.id for s in selections]
    for a in sel_ids:
        for b in sel_ids:
            _req(a == b or not b.startswith(a + "_"),
                 f"selection id {b!r} lies inside the signal namespace of {a!r}")
    return InteractionSet(selections=selections, applications=applications,
                          widgets=widgets, bindings=bindings)


# ---------------------------------------------------------------------------
# Signal enumeration


def data_signal_base(field_name: str) -> str:
    # A field literally named "x"/"y" would collide with the pixel signals.
    return f"{field_name}_data" if field_name in ("x", "y") else field_name


def point_fields(chart: ChartSpec, view: ViewDef) -> tuple[FieldDef, ...]:
    """Fields of the datum a point selection on this view captures."""
    return backing_fields(chart, view)


def enumerate_signals(selection: Selection, chart: ChartSpec) -> list[SignalDescriptor]:
    """Name every dynamic value the selection exposes.

    Intervals expose pixel and data start/end extents per projected axis;
    point selections expose one data-space value signal per field of the
    backing datum; hover selections add mouse position in both spaces.
    Names are deterministic and unique within the chart.
    """
    view = chart.view(selection.source_view)
    out: list[SignalDescriptor] = []
    sid = selection.id

    if selection.kind == "interval":
        for axis in ("x", "y"):
            if axis not in selection.projection:
                continue
            for role in ("start", "end"):
                out.append(SignalDescriptor(
                    name=f"{sid}_{axis}_{role}", space="pixel", role=role,
                    selection=sid, axis=axis))
            scale = view.scale_for(axis)
            if scale is not None:
                base = data_signal_base(scale.field)
                for role in ("start", "end"):
                    out.append(SignalDescriptor(
                        name=f"{sid}_{base}_{role}", space="data", role=role,
                        selection=sid, field=scale.field, axis=axis))
    else:
        for f in point_fields(chart, view):
            out.append(SignalDescriptor(
                name=f"{sid}_{f.name}_value", space="data", role="value",
                selection=sid, field=f.name))
        if selection.event_source == "hover":
            for axis, role in (("x", "mouse_x"), ("y", "mouse_y")):
                out.append(SignalDescriptor(
                    name=f"{sid}_{role}", space="pixel", role=role,
                    selection=sid, axis=axis))
            for axis, role in (("x", "mouse_x"), ("y", "mouse_y")):
                scale = view.scale_for(axis)
                if scale is not None:
                    out.append(SignalDescriptor(
                        name=f"{sid}_{role}_data", space="data", role=role,
                        selection=sid, field=scale.field, axis=axis))

    names = [s.name for s in out]
    if len(names) != len(set(names)):
        raise CompileError(f"signal names for selection {sid!r} collide: {names}")
    return out


# ---------------------------------------------------------------------------
# Widget predicates


def widget_predicate(widget: QueryWidget, widget_value: Any, record: Mapping[str, Any],
                     chart: ChartSpec | None = None) -> bool:
    """Decide whether one record satisfies the widget's comparator.

    ``between`` is inclusive on both ends. Ordering comparators require
    numeric or temporal operands; a missing record value selects nothing.
    """
    if widget.field not in record:
        raise TypeMismatch(f"record lacks widget field {widget.field!r}")
    actual = record[widget.field]
    comparator = widget.comparator

    if comparator in ("==", "!="):
        result = actual == widget_value
        return result if comparator == "==" else not result

    def as_orderable(v: Any) -> float:
        n = parse_number(v)
        if n is not None:
            return n
        d = parse_iso_date(v)
        if d is not None:
            return d.timestamp()
        raise TypeMismatch(f"value {v!r} is not orderable for comparator {comparator!r}")

    if comparator == "between":
        if not (isinstance(widget_value, Sequence) and not isinstance(widget_value, str)
                and len(widget_value) == 2):
            raise TypeMismatch("between expects a (low, high) pair")
        if actual is None:
            return False
        lo, hi = as_orderable(widget_value[0]), as_orderable(widget_value[1])
        v = as_orderable(actual)
        return lo <= v <= hi

    if actual is None:
        return False
    left, right = as_orderable(actual), as_orderable(widget_value)
    if comparator == "<":
        return left < right
    if comparator == "<=":
        return left <= right
    if comparator == ">":
        return left > right
    return left >= right


# ---------------------------------------------------------------------------
# Validation


@dataclass(frozen=True)
class Violation:
    code: str
    ref: str
    message: str

    def to_dict(self) -> dict[str, Any]:
        return {"code": self.code, "ref": self.ref, "message": self.message}


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, code: str, ref: str, message: str) -> None:
        self.violations.append(Violation(code=code, ref=ref, message=message))

    def to_dict(self) -> dict[str, Any]:
        return {"valid": self.ok, "violations": [v.to_dict() for v in self.violations]}


def _validate_selection(chart: ChartSpec, sel: Selection, report: ValidationReport) -> None:
    try:
        view = chart.view(sel.source_view)
    except Exception:
        report.add("DanglingReference", sel.source_view,
                   f"selection {sel.id!r} references unknown view {sel.source_view!r}")
        return
    if sel.kind == "interval":
        for axis in sel.projection:
            scale = view.scale_for(axis)
            if scale is None:
                report.add("InvalidProjection", sel.id,
                           f"selection {sel.id!r} brushes the {axis}-axis but the view "
                           f"has no {axis}-scale")
            elif scale.is_aggregate:
                report.add("InvalidProjection", sel.id,
                           f"selection {sel.id!r} brushes the {axis}-axis, an "
                           f"aggregate measure ({scale.aggregate} of {scale.field!r})")
    else:
        names = {f.name for f in point_fields(chart, view)}
        for fname in sel.projection:
            if fname not in names:
                report.add("DanglingReference", fname,
                           f"selection {sel.id!r} projects over unknown field {fname!r}")


def _validate_application(chart: ChartSpec, app: Application,
                          selection: Selection | None, report: ValidationReport) -> None:
    if app.kind == "conditional_encoding":
        try:
            chart.mark(app.target)
        except Exception:
            report.add("DanglingReference", app.target,
                       f"application {app.id!r} targets unknown mark {app.target!r}")
    elif app.kind == "filter":
        try:
            chart.view(app.target)
        except Exception:
            report.add("DanglingReference", app.target,
                       f"application {app.id!r} filters unknown view {app.target!r}")
            return
        if (selection is not None and app.target == selection.source_view
                and not app.self_filter):
            report.add("InvalidApplication", app.id,
                       f"application {app.id!r} filters the selection's own view "
                       "without selfFilter")
    elif app.kind == "pan_zoom":
        try:
            chart.view(app.target)
        except Exception:
            report.add("DanglingReference", app.target,
                       f"application {app.id!r} targets unknown view {app.target!r}")
        for sid in app.scales:
            try:
                _, scale = chart.find_scale(sid)
            except Exception:
                report.add("DanglingReference", sid,
                           f"application {app.id!r} pans unknown scale {sid!r}")
                continue
            if scale.domain_kind != "continuous" or scale.channel not in ("x", "y"):
                report.add("InvalidApplication", sid,
                           f"application {app.id!r} can only pan/zoom continuous "
                           "spatial scales")
    elif app.kind == "scale_domain":
        try:
            _, scale = chart.find_scale(app.target)
        except Exception:
            report.add("DanglingReference", app.target,
                       f"application {app.id!r} targets unknown scale {app.target!r}")
            return
        if scale.domain_kind != "continuous" or scale.channel not in ("x", "y"):
            report.add("InvalidApplication", app.target,
                       f"application {app.id!r} can only drive continuous spatial "
                       "scale domains")


def _validate_binding(chart: ChartSpec, binding: SignalBinding,
                      signals: Mapping[str, SignalDescriptor],
                      report: ValidationReport) -> None:
    desc = signals.get(binding.signal)
    if desc is None:
        report.add("DanglingReference", binding.signal,
                   f"binding references unknown signal {binding.signal!r}")
        return
    try:
        chart.mark(binding.mark)
    except Exception:
        report.add("DanglingReference", binding.mark,
                   f"binding targets unknown mark {binding.mark!r}")
        return
    allowed = PIXEL_BINDABLE if desc.space == "pixel" else DATA_BINDABLE
    if binding.property not in allowed:
        report.add("IllegalBinding", binding.signal,
                   f"a {desc.space}-space signal cannot drive the "
                   f"{binding.property!r} property (allowed: {', '.join(allowed)})")


def _validate_widget(chart: ChartSpec, widget: QueryWidget, report: ValidationReport) -> None:
    try:
        fdef: FieldDef = chart.field_anywhere(widget.field)
    except Exception:
        report.add("DanglingReference", widget.field,
                   f"widget {widget.id!r} binds unknown field {widget.field!r}")
        return
    if widget.widget_kind == "range" and fdef.measure_type not in ("quantitative", "temporal"):
        report.add("WidgetTypeMismatch", widget.id,
                   f"range widget {widget.id!r} needs a quantitative or temporal "
                   f"field, got {fdef.measure_type} {widget.field!r}")
    if widget.comparator in ("<", "<=", ">", ">=", "between") \
            and fdef.measure_type in ("nominal",):
        report.add("WidgetTypeMismatch", widget.id,
                   f"widget {widget.id!r} orders a nominal field {widget.field!r}")
    for app in widget.applications:
        _validate_application(chart, app, None, report)


def validate_interaction(chart: ChartSpec, interaction: InteractionDef) -> ValidationReport:
    """Check one interaction definition against a chart.

    An empty report means the interaction is semantically valid; each
    violation carries a code and the offending reference.
    """
    report = ValidationReport()
    if interaction.widget is not None:
        _validate_widget(chart, interaction.widget, report)
        return report

    signals: dict[str, SignalDescriptor] = {}
    if interaction.selection is not None:
        _validate_selection(chart, interaction.selection, report)
        if report.ok:
            signals = {d.name: d for d in enumerate_signals(interaction.selection, chart)}
    for app in interaction.applications:
        _validate_application(chart, app, interaction.selection, report)
    for binding in interaction.bindings:
        _validate_binding(chart, binding, signals, report)
    return report


def validate_set(chart: ChartSpec, interactions: InteractionSet) -> ValidationReport:
    """Validate a whole interaction document."""
    report = ValidationReport()
    known = {s.id for s in interactions.selections}
    for app in interactions.applications:
        if app.selection not in known:
            report.add("DanglingReference", app.selection or app.id,
                       f"application {app.id!r} references missing selection "
                       f"{app.selection!r}")
    for idef in interactions.interaction_defs(chart):
        sub = validate_interaction(chart, idef)
        report.violations.extend(sub.violations)
    return report

"""Four-phase suggestion system.

Phase 1 enumerates selection candidates from the event type and the view's
marks and scales, phase 2 enumerates applications from mark types, scale
continuity, and shared data sources, phase 3 enumerates the default
candidate's signals, and phase 4 picks defaults from the demonstration
geometry (drag trajectory angle, click chunk size).

The rules are deliberately conservative: an axis that carries an aggregate
measure is never offered for brushing, and nothing is ever inferred from
mouse proximity alone.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

from .chart import ChartSpec, FieldDef, ViewProfile, profile_view
from .errors import CompileError, NoValidSelection
from .interactions import (
    Application,
    InteractionDef,
    QueryWidget,
    Selection,
    SignalDescriptor,
    enumerate_signals,
    validate_interaction,
)
from .trace import Demonstration

#: Angle (degrees from an axis) within which a drag counts as axis-aligned.
AXIS_SNAP_DEG = 30.0

#: Mark types that admit two-dimensional brushes.
BRUSH_2D_MARKS = frozenset({"rect", "symbol", "text", "rule", "group"})

#: Mark types that never receive conditional encodings.
PATH_MARKS = frozenset({"area", "line"})

#: Channel priority for the default point-projection field.
PROJECTION_CHANNEL_PRIORITY = ("color", "size", "opacity", "shape")

INTERVAL_RULE_ORDER = (("x", "y"), ("x",), ("y",))

DEFAULT_INTERVAL_ID = "brush"
DEFAULT_POINT_ID = "pick"


@dataclass(frozen=True)
class SuggestionSet:
    selections: tuple[Selection, ...]
    applications: tuple[Application, ...]
    signals: tuple[SignalDescriptor, ...]
    default_selection: int
    demonstration: Demonstration

    def to_dict(self) -> dict[str, Any]:
        return {
            "version": 1,
            "selections": [s.to_dict() for s in self.selections],
            "applications": [a.to_dict() for a in self.applications],
            "signals": [s.to_dict() for s in self.signals],
            "defaultSelection": self.default_selection,
            "demonstration": self.demonstration.to_dict(),
        }


@dataclass(frozen=True)
class WidgetSuggestionSet:
    widgets: tuple[QueryWidget, ...]
    default: int

    def to_dict(self) -> dict[str, Any]:
        return {
            "version": 1,
            "widgets": [w.to_dict() for w in self.widgets],
            "default": self.default,
        }


def _axis_brushable(profile: ViewProfile, axis: str) -> bool:
    ax = profile.axis(axis)
    return ax.kind != "none" and not ax.aggregate


def _projection_fields(profile: ViewProfile) -> list[str]:
    """Fields a point selection may project over, default-priority first.

    Candidates are the distinct non-aggregate encoded fields in declaration
    order; the first field found on a non-positional channel (color, then
    size, opacity, shape) is promoted to the front as the default.
    """
    ordered: list[str] = []
    for _channel, fdef in profile.encoded_fields:
        if fdef.name not in ordered:
            ordered.append(fdef.name)
    default: str | None = None
    for channel in PROJECTION_CHANNEL_PRIORITY:
        for ch, fdef in profile.encoded_fields:
            if ch == channel:
                default = fdef.name
                break
        if default is not None:
            break
    if default is not None:
        ordered.remove(default)
        ordered.insert(0, default)
    return ordered


def enumerate_selection_suggestions(
    profile: ViewProfile, demo: Demonstration
) -> list[Selection]:
    """Phase 1: candidate selections for one demonstration.

    Drags yield interval candidates in rule-table order ({x,y}, {x}, {y}):
    a single-axis brush needs a non-aggregate scale on that axis, the 2D
    brush additionally needs a rect/symbol/text mark and continuous scales
    on both axes, and views drawn purely with path marks (area, line) only
    ever brush along x. Clicks and hovers yield point candidates: single,
    multi, then projected variants over the encoded fields.
    """
    view = profile.view
    if not view.marks:
        raise NoValidSelection(f"view {view.id!r} has no marks to select")

    if demo.kind == "drag":
        path_only = bool(profile.mark_types) and profile.mark_types <= PATH_MARKS
        allowed: list[tuple[str, ...]] = []
        for projection in INTERVAL_RULE_ORDER:
            if projection == ("x", "y"):
                ok = (bool(profile.mark_types & BRUSH_2D_MARKS)
                      and profile.x_scale.kind == "continuous"
                      and not profile.x_scale.aggregate
                      and profile.y_scale.kind == "continuous"
                      and not profile.y_scale.aggregate)
            elif projection == ("x",):
                ok = _axis_brushable(profile, "x")
            else:
                ok = _axis_brushable(profile, "y") and not path_only
            if ok:
                allowed.append(projection)
        if not allowed:
            raise NoValidSelection(
                f"view {view.id!r} has no axis a brush could validly project onto")
        return [
            Selection(id=DEFAULT_INTERVAL_ID, kind="interval", event_source="drag",
                      source_view=view.id, projection=projection)
            for projection in allowed
        ]

    source = "hover" if demo.kind == "hover" else "click"
    candidates = [
        Selection(id=DEFAULT_POINT_ID, kind="point", event_source=source,
                  source_view=view.id, cardinality="single"),
        Selection(id=DEFAULT_POINT_ID, kind="point", event_source=source,
                  source_view=view.id, cardinality="multi"),
    ]
    for fname in _projection_fields(profile):
        candidates.append(Selection(
            id=DEFAULT_POINT_ID, kind="point", event_source=source,
            source_view=view.id, cardinality="single", projection=(fname,)))
    return candidates


def enumerate_application_suggestions(
    profile: ViewProfile, selections: list[Selection]
) -> list[Application]:
    """Phase 2: candidate applications for the view the demo happened in.

    Marks other than areas and lines get conditional color and opacity;
    symbols additionally get conditional size. Any continuous spatial scale
    enables pan & zoom over all continuous spatial scales. Views sharing a
    data source contribute a cross-view filter plus a linked highlight.
    """
    if not selections:
        return []
    sid = selections[0].id
    view = profile.view
    apps: list[Application] = []

    for mark in view.marks:
        if mark.mark_type in PATH_MARKS:
            continue
        for channel in ("color", "opacity"):
            apps.append(Application(
                id=f"{sid}_{channel}_{mark.id}", kind="conditional_encoding",
                target=mark.id, selection=sid, channel=channel))
        if mark.mark_type == "symbol":
            apps.append(Application(
                id=f"{sid}_size_{mark.id}", kind="conditional_encoding",
                target=mark.id, selection=sid, channel="size"))

    continuous = tuple(
        s.id for s in view.scales
        if s.channel in ("x", "y") and s.domain_kind == "continuous"
    )
    if continuous:
        apps.append(Application(
            id=f"{sid}_panzoom_{view.id}", kind="pan_zoom", target=view.id,
            selection=sid, scales=continuous))

    for shared in profile.shared_data_views:
        apps.append(Application(
            id=f"{sid}_filter_{shared.id}", kind="filter", target=shared.id,
            selection=sid))
    for shared in profile.shared_data_views:
        for mark in shared.marks:
            if mark.mark_type in PATH_MARKS:
                continue
            apps.append(Application(
                id=f"{sid}_link_{mark.id}", kind="conditional_encoding",
                target=mark.id, selection=sid, channel="color"))
    return apps


def enumerate_signal_suggestions(
    selections: list[Selection], chart: ChartSpec
) -> list[SignalDescriptor]:
    """Phase 3: signals exposed by the default (first) candidate."""
    if not selections:
        return []
    return enumerate_signals(selections[0], chart)


def geometric_default_projection(angle: float) -> tuple[str, ...]:
    """Map a folded drag angle to the default interval projection.

    Within 30 deg of horizontal constrains to x, within 30 deg of vertical
    constrains to y (both boundaries inclusive); anything else stays an
    unconstrained 2D brush.
    """
    if angle <= AXIS_SNAP_DEG:
        return ("x",)
    if angle >= 90.0 - AXIS_SNAP_DEG:
        return ("y",)
    return ("x", "y")


def infer_defaults(candidates: list[Selection], demo: Demonstration) -> list[Selection]:
    """Phase 4: reorder candidates so the demonstration's default is first.

    Drags snap to an axis-constrained brush by trajectory angle, falling
    back to the first rule-table candidate when the geometric default was
    filtered out in phase 1. Click chunks of two or more default to a multi
    selection; single clicks and hovers default to single.
    """
    if not candidates:
        return []
    default_index = 0
    if demo.kind == "drag" and demo.trajectory_angle is not None:
        wanted = geometric_default_projection(demo.trajectory_angle)
        for i, cand in enumerate(candidates):
            if cand.projection == wanted:
                default_index = i
                break
    elif demo.kind == "click_chunk":
        wanted_card = "multi" if demo.click_count >= 2 else "single"
        for i, cand in enumerate(candidates):
            if cand.cardinality == wanted_card and not cand.projection:
                default_index = i
                break
    reordered = [candidates[default_index]]
    reordered.extend(c for i, c in enumerate(candidates) if i != default_index)
    return reordered


def suggest(chart: ChartSpec, demo: Demonstration) -> SuggestionSet:
    """Compose phases 1-4 into a validated, deterministically ordered set."""
    profile = profile_view(chart, demo.view_id)
    candidates = enumerate_selection_suggestions(profile, demo)
    applications = enumerate_application_suggestions(profile, candidates)
    ordered = infer_defaults(candidates, demo)
    signals = enumerate_signal_suggestions(ordered, chart)

    apps = tuple(applications)
    for cand in ordered:
        report = validate_interaction(chart, InteractionDef(selection=cand, applications=apps))
        if not report.ok:
            raise CompileError(
                f"suggestion heuristics produced an invalid candidate: "
                f"{report.violations[0].message}")
    return SuggestionSet(
        selections=tuple(ordered),
        applications=apps,
        signals=tuple(signals),
        default_selection=0,
        demonstration=demo,
    )


def suggest_widgets(chart: ChartSpec, field: str | FieldDef) -> WidgetSuggestionSet:
    """Suggest query widgets for a field from its measure type.

    Discrete fields get radio buttons (default) and a dropdown; continuous
    and temporal fields get a range slider over the column extent.
    """
    name = field.name if isinstance(field, FieldDef) else field
    fdef = chart.field_anywhere(name)  # raises UnknownField

    if fdef.measure_type in ("nominal", "ordinal"):
        widgets = (
            QueryWidget(id=f"{name}_radio", field=name, widget_kind="radio",
                        comparator="=="),
            QueryWidget(id=f"{name}_select", field=name, widget_kind="select",
                        comparator="=="),
        )
    else:
        widgets = (
            QueryWidget(id=f"{name}_range", field=name, widget_kind="range",
                        comparator="<="),
        )
    return WidgetSuggestionSet(widgets=widgets, default=0)


__all__ = [
    "AXIS_SNAP_DEG",
    "SuggestionSet",
    "WidgetSuggestionSet",
    "enumerate_selection_suggestions",
    "enumerate_application_suggestions",
    "enumerate_signal_suggestions",
    "geometric_default_projection",
    "infer_defaults",
    "suggest",
    "suggest_widgets",
]

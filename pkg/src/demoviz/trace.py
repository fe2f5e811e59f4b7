"""Input-event traces and their classification into demonstrations.

A trace is a time-ordered list of pointer events over a single view. The
classifier partitions it into maximal demonstrations: drags (pointerdown …
pointerup with enough net displacement), click chunks (clicks grouped by
the 800 ms rule), and hovers (hoverenter runs).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Any, Iterable, Sequence

from .errors import EmptyTrace, ParseError, UnbalancedTrace, ZeroDisplacement

EVENT_KINDS = ("pointerdown", "pointermove", "pointerup", "click", "hoverenter")

#: Clicks closer together than this (ms) belong to the same chunk.
CLICK_CHUNK_MS = 800.0

#: Net pointer displacement (px) below which a down/up pair is a click.
DRAG_EPSILON_PX = 4.0


@dataclass(frozen=True)
class EventTarget:
    mark_id: str
    datum_index: int

    def to_dict(self) -> dict[str, Any]:
        return {"markId": self.mark_id, "datumIndex": self.datum_index}


@dataclass(frozen=True)
class InputEvent:
    kind: str
    x: float
    y: float
    t: float
    view_id: str
    target: EventTarget | None = None
    out_of_bounds: bool = False

    def to_dict(self) -> dict[str, Any]:
        d: dict[str, Any] = {
            "kind": self.kind,
            "x": self.x,
            "y": self.y,
            "t": self.t,
            "viewId": self.view_id,
        }
        if self.target is not None:
            d["target"] = self.target.to_dict()
        if self.out_of_bounds:
            d["outOfBounds"] = True
        return d


@dataclass(frozen=True)
class Demonstration:
    kind: str  # "drag" | "click_chunk" | "hover"
    view_id: str
    events: tuple[InputEvent, ...]
    start: tuple[float, float] | None = None
    end: tuple[float, float] | None = None
    trajectory_angle: float | None = None
    click_count: int = 0
    clicked_datums: tuple[EventTarget, ...] = ()

    def to_dict(self) -> dict[str, Any]:
        d: dict[str, Any] = {
            "kind": self.kind,
            "viewId": self.view_id,
            "events": [e.to_dict() for e in self.events],
        }
        if self.kind == "drag":
            d["start"] = list(self.start)
            d["end"] = list(self.end)
            d["trajectoryAngle"] = self.trajectory_angle
        elif self.kind == "click_chunk":
            d["clickCount"] = self.click_count
            d["clickedDatums"] = [t.to_dict() for t in self.clicked_datums]
        return d


def parse_trace(document: str | Sequence[Any]) -> list[InputEvent]:
    """Parse the trace wire format: a JSON array of event objects."""
    if isinstance(document, str):
        try:
            raw = json.loads(document)
        except json.JSONDecodeError as exc:
            raise ParseError(f"trace document is not valid JSON: {exc}")
    else:
        raw = document
    if not isinstance(raw, list):
        raise ParseError("trace document must be a JSON array of events")
    events: list[InputEvent] = []
    for i, obj in enumerate(raw):
        if not isinstance(obj, dict):
            raise ParseError(f"trace event {i} must be an object")
        kind = obj.get("kind")
        if kind not in EVENT_KINDS:
            raise ParseError(f"trace event {i} has unknown kind {kind!r}")
        try:
            x, y, t = float(obj["x"]), float(obj["y"]), float(obj["t"])
        except (KeyError, TypeError, ValueError):
            raise ParseError(f"trace event {i} needs numeric x, y, t")
        view_id = obj.get("viewId")
        if not isinstance(view_id, str):
            raise ParseError(f"trace event {i} needs a viewId")
        target = None
        if obj.get("target") is not None:
            tobj = obj["target"]
            if (not isinstance(tobj, dict) or not isinstance(tobj.get("markId"), str)
                    or not isinstance(tobj.get("datumIndex"), int)):
                raise ParseError(f"trace event {i} has a malformed target")
            target = EventTarget(mark_id=tobj["markId"], datum_index=tobj["datumIndex"])
        events.append(InputEvent(
            kind=kind, x=x, y=y, t=t, view_id=view_id, target=target,
            out_of_bounds=bool(obj.get("outOfBounds", False)),
        ))
    return events


def _fold_angle(dx: float, dy: float) -> float:
    """Angle of the displacement vector from horizontal, folded into [0, 90]."""
    return math.degrees(math.atan2(abs(dy), abs(dx)))


def drag_angle(drag: Demonstration) -> float:
    """Trajectory angle of a drag, in degrees from the horizontal axis."""
    if drag.kind != "drag":
        raise ParseError("drag_angle expects a drag demonstration")
    dx = drag.end[0] - drag.start[0]
    dy = drag.end[1] - drag.start[1]
    if dx == 0 and dy == 0:
        raise ZeroDisplacement("drag has zero net displacement")
    return _fold_angle(dx, dy)


def chunk_clicks(clicks: Sequence[InputEvent]) -> list[list[InputEvent]]:
    """Partition time-ordered clicks: a gap >= 800 ms starts a new chunk."""
    chunks: list[list[InputEvent]] = []
    for ev in clicks:
        if chunks and ev.t - chunks[-1][-1].t < CLICK_CHUNK_MS:
            chunks[-1].append(ev)
        else:
            chunks.append([ev])
    return chunks


def _make_drag(events: list[InputEvent]) -> Demonstration:
    down, up = events[0], events[-1]
    return Demonstration(
        kind="drag",
        view_id=down.view_id,
        events=tuple(events),
        start=(down.x, down.y),
        end=(up.x, up.y),
        trajectory_angle=_fold_angle(up.x - down.x, up.y - down.y),
    )


def _make_click_chunk(events: list[InputEvent]) -> Demonstration:
    return Demonstration(
        kind="click_chunk",
        view_id=events[0].view_id,
        events=tuple(events),
        click_count=len(events),
        clicked_datums=tuple(e.target for e in events if e.target is not None),
    )


def _make_hover(events: list[InputEvent]) -> Demonstration:
    return Demonstration(kind="hover", view_id=events[0].view_id, events=tuple(events))


def classify(events: Iterable[InputEvent]) -> list[Demonstration]:
    """Partition a balanced, time-ordered trace into demonstrations.

    Down/up pairs moving less than DRAG_EPSILON_PX collapse into synthetic
    clicks so sloppy taps chunk together with real click events. Stray
    pointermoves outside a drag or hover run are dropped.
    """
    events = list(events)
    if not events:
        raise EmptyTrace("trace holds no events")
    for prev, cur in zip(events, events[1:]):
        if cur.t < prev.t:
            raise ParseError("trace events must be time-ordered")

    # First pass: reduce the raw stream to (kind, payload) atoms in order.
    atoms: list[tuple[str, Any]] = []
    i = 0
    while i < len(events):
        ev = events[i]
        if ev.kind == "pointerdown":
            j = i + 1
            segment = [ev]
            while j < len(events) and events[j].kind in ("pointermove", "hoverenter"):
                if events[j].kind == "pointermove":
                    segment.append(events[j])
                j += 1
            if j >= len(events) or events[j].kind != "pointerup":
                raise UnbalancedTrace("pointerdown without a matching pointerup")
            segment.append(events[j])
            down, up = segment[0], segment[-1]
            if math.hypot(up.x - down.x, up.y - down.y) >= DRAG_EPSILON_PX:
                atoms.append(("drag", segment))
            else:
                click = InputEvent(kind="click", x=up.x, y=up.y, t=up.t,
                                   view_id=up.view_id,
                                   target=up.target or down.target)
                atoms.append(("click", click))
            i = j + 1
        elif ev.kind == "pointerup":
            raise UnbalancedTrace("pointerup without a preceding pointerdown")
        elif ev.kind == "click":
            atoms.append(("click", ev))
            i += 1
        elif ev.kind == "hoverenter":
            run = [ev]
            j = i + 1
            while j < len(events) and events[j].kind in ("hoverenter", "pointermove"):
                run.append(events[j])
                j += 1
            atoms.append(("hover", run))
            i = j
        else:  # stray pointermove
            i += 1

    # Second pass: chunk maximal click runs; everything else maps 1:1.
    demos: list[Demonstration] = []
    pending_clicks: list[InputEvent] = []

    def flush() -> None:
        for chunk in chunk_clicks(pending_clicks):
            demos.append(_make_click_chunk(chunk))
        pending_clicks.clear()

    for kind, payload in atoms:
        if kind == "click":
            pending_clicks.append(payload)
            continue
        flush()
        demos.append(_make_drag(payload) if kind == "drag" else _make_hover(payload))
    flush()
    return demos

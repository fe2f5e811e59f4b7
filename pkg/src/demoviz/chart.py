"""Static chart data model and ingestion.

A chart document is an original, versioned JSON schema (not Vega or
Vega-Lite input): top-level keys ``version``, ``datasets``, ``views``.
Datasets carry inline rows or a ``url`` pointing at a local CSV/JSON file.
Everything is immutable after :func:`load_chart` returns, so charts can be
shared freely across threads.

The compiler and the suggestion heuristics never see raw documents; they
consume :class:`ChartSpec` and the derived :class:`ViewProfile`.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from datetime import date, datetime
from pathlib import Path
from typing import Any, Iterable, Mapping

from .errors import (
    EmptyChart,
    EmptyColumn,
    ParseError,
    ReferenceError,
    UnknownField,
    UnknownView,
)

CHART_FORMAT_VERSION = 1

MEASURE_TYPES = ("nominal", "ordinal", "quantitative", "temporal")
CHANNELS = ("x", "y", "color", "size", "shape", "opacity")
SPATIAL_CHANNELS = ("x", "y")
MARK_TYPES = ("symbol", "rect", "line", "area", "text", "rule", "group")
AGGREGATE_OPS = ("count", "sum", "mean", "min", "max")


def parse_iso_date(value: Any) -> datetime | None:
    """Parse a full-precision ISO-8601 date or timestamp, else None."""
    if isinstance(value, str):
        try:
            return datetime.fromisoformat(value)
        except ValueError:
            pass
        try:
            d = date.fromisoformat(value)
            return datetime(d.year, d.month, d.day)
        except ValueError:
            return None
    return None


def parse_number(value: Any) -> float | None:
    """Parse a finite number, else None. Booleans are not numbers here."""
    if isinstance(value, bool):
        return None
    if isinstance(value, (int, float)):
        return float(value)
    if isinstance(value, str):
        try:
            f = float(value)
        except ValueError:
            return None
        if f != f or f in (float("inf"), float("-inf")):
            return None
        return f
    return None


def infer_measure_type(values: Iterable[Any]) -> str:
    """Infer a measure type from a column of scalars.

    Precedence: temporal (every non-null value parses as ISO-8601) >
    quantitative (every non-null value parses as a number) > nominal.
    Ordinal is never inferred; it must be annotated explicitly. Mixed
    columns fall back to nominal rather than erroring.
    """
    values = list(values)
    if not values:
        raise EmptyColumn("cannot infer a measure type from an empty column")
    present = [v for v in values if v is not None]
    if not present:
        return "nominal"
    if all(parse_iso_date(v) is not None for v in present):
        return "temporal"
    if all(parse_number(v) is not None for v in present):
        return "quantitative"
    return "nominal"


@dataclass(frozen=True)
class FieldDef:
    name: str
    measure_type: str

    def to_dict(self) -> dict[str, Any]:
        return {"name": self.name, "type": self.measure_type}


@dataclass(frozen=True)
class DataTable:
    id: str
    fields: tuple[FieldDef, ...]
    rows: tuple[Mapping[str, Any], ...]
    url: str | None = None

    def field(self, name: str) -> FieldDef:
        for f in self.fields:
            if f.name == name:
                return f
        raise ReferenceError(f"dataset {self.id!r} has no field {name!r}", ref=name)

    def field_names(self) -> tuple[str, ...]:
        return tuple(f.name for f in self.fields)

    def column(self, name: str) -> list[Any]:
        self.field(name)
        return [row.get(name) for row in self.rows]

    def to_dict(self) -> dict[str, Any]:
        d: dict[str, Any] = {
            "id": self.id,
            "fields": [f.to_dict() for f in self.fields],
            "rows": [dict(r) for r in self.rows],
        }
        if self.url is not None:
            d["url"] = self.url
        return d


@dataclass(frozen=True)
class ScaleDef:
    id: str
    channel: str
    domain_kind: str  # "discrete" | "continuous"
    field: str
    aggregate: str | None = None
    range_extent: tuple[float, float] | None = None

    @property
    def is_aggregate(self) -> bool:
        return self.aggregate is not None

    def to_dict(self) -> dict[str, Any]:
        d: dict[str, Any] = {
            "id": self.id,
            "channel": self.channel,
            "kind": self.domain_kind,
            "field": self.field,
        }
        if self.aggregate is not None:
            d["aggregate"] = self.aggregate
        if self.range_extent is not None:
            d["range"] = list(self.range_extent)
        return d


@dataclass(frozen=True)
class Encoding:
    """One channel binding on a mark: scale+field, constant, or signal."""

    scale: str | None = None
    field: str | None = None
    value: Any = None
    signal: str | None = None

    @property
    def kind(self) -> str:
        if self.signal is not None:
            return "signal"
        if self.scale is not None:
            return "field"
        return "constant"

    def to_dict(self) -> dict[str, Any]:
        if self.signal is not None:
            return {"signal": self.signal}
        if self.scale is not None:
            return {"scale": self.scale, "field": self.field}
        return {"value": self.value}


@dataclass(frozen=True)
class MarkDef:
    id: str
    mark_type: str
    dataset: str
    encodings: Mapping[str, Encoding]

    def to_dict(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "type": self.mark_type,
            "dataset": self.dataset,
            "encodings": {ch: e.to_dict() for ch, e in self.encodings.items()},
        }


@dataclass(frozen=True)
class ViewDef:
    id: str
    width: float
    height: float
    scales: tuple[ScaleDef, ...]
    marks: tuple[MarkDef, ...]

    def scale_for(self, channel: str) -> ScaleDef | None:
        for s in self.scales:
            if s.channel == channel:
                return s
        return None

    def scale(self, scale_id: str) -> ScaleDef:
        for s in self.scales:
            if s.id == scale_id:
                return s
        raise ReferenceError(f"view {self.id!r} has no scale {scale_id!r}", ref=scale_id)

    def to_dict(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "width": self.width,
            "height": self.height,
            "scales": [s.to_dict() for s in self.scales],
            "marks": [m.to_dict() for m in self.marks],
        }


@dataclass(frozen=True)
class ChartSpec:
    datasets: tuple[DataTable, ...]
    views: tuple[ViewDef, ...]

    def dataset(self, dataset_id: str) -> DataTable:
        for d in self.datasets:
            if d.id == dataset_id:
                return d
        raise ReferenceError(f"unknown dataset {dataset_id!r}", ref=dataset_id)

    def view(self, view_id: str) -> ViewDef:
        for v in self.views:
            if v.id == view_id:
                return v
        raise UnknownView(f"unknown view {view_id!r}", ref=view_id)

    def mark(self, mark_id: str) -> tuple[ViewDef, MarkDef]:
        for v in self.views:
            for m in v.marks:
                if m.id == mark_id:
                    return v, m
        raise ReferenceError(f"unknown mark {mark_id!r}", ref=mark_id)

    def find_scale(self, scale_id: str) -> tuple[ViewDef, ScaleDef]:
        for v in self.views:
            for s in v.scales:
                if s.id == scale_id:
                    return v, s
        raise ReferenceError(f"unknown scale {scale_id!r}", ref=scale_id)

    def field_anywhere(self, name: str) -> FieldDef:
        for d in self.datasets:
            for f in d.fields:
                if f.name == name:
                    return f
        raise UnknownField(f"no dataset declares a field {name!r}", ref=name)

    def to_dict(self) -> dict[str, Any]:
        return {
            "version": CHART_FORMAT_VERSION,
            "datasets": [d.to_dict() for d in self.datasets],
            "views": [v.to_dict() for v in self.views],
        }


@dataclass(frozen=True)
class AxisProfile:
    kind: str  # "none" | "discrete" | "continuous"
    aggregate: bool
    scale: ScaleDef | None = None


@dataclass(frozen=True)
class ViewProfile:
    """Everything the suggestion heuristics need to know about one view."""

    view: ViewDef
    mark_types: frozenset[str]
    x_scale: AxisProfile
    y_scale: AxisProfile
    encoded_fields: tuple[tuple[str, FieldDef], ...]
    shared_data_views: tuple[ViewDef, ...] = field(default=())

    def axis(self, channel: str) -> AxisProfile:
        return self.x_scale if channel == "x" else self.y_scale


# ---------------------------------------------------------------------------
# Parsing


def _require(condition: bool, message: str, ref: str | None = None) -> None:
    if not condition:
        raise ParseError(message, ref=ref)


def _as_pixel(value: Any) -> float | int:
    """Keep integral pixel quantities as ints so documents stay clean."""
    f = float(value)
    return int(f) if f.is_integer() else f


def _load_url_rows(url: str, base_dir: Path | None) -> list[dict[str, Any]]:
    path = Path(url)
    if not path.is_absolute():
        path = (base_dir or Path.cwd()) / path
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read dataset url {url!r}: {exc}", ref=url)
    if path.suffix.lower() == ".json":
        data = json.loads(text)
        _require(isinstance(data, list), f"dataset url {url!r} must hold a JSON array")
        return data
    reader = csv.DictReader(io.StringIO(text))
    return [dict(r) for r in reader]


def _coerce_csv_rows(
    rows: list[dict[str, Any]], fields: list[FieldDef]
) -> list[dict[str, Any]]:
    # CSV gives strings; narrow quantitative columns back to numbers.
    quantitative = {f.name for f in fields if f.measure_type == "quantitative"}
    out = []
    for row in rows:
        coerced = dict(row)
        for name in quantitative:
            v = row.get(name)
            if isinstance(v, str) and v != "":
                n = parse_number(v)
                if n is not None:
                    coerced[name] = int(n) if n.is_integer() else n
        out.append(coerced)
    return out


def _parse_dataset(obj: Any, base_dir: Path | None) -> DataTable:
    _require(isinstance(obj, dict), "dataset entries must be objects")
    _require(isinstance(obj.get("id"), str) and obj["id"], "dataset needs a string id")
    ds_id = obj["id"]

    url = obj.get("url")
    if url is not None:
        _require(isinstance(url, str), f"dataset {ds_id!r}: url must be a string")
        rows = _load_url_rows(url, base_dir)
    else:
        rows = obj.get("rows")
        _require(isinstance(rows, list), f"dataset {ds_id!r}: rows must be an array")
    for row in rows:
        _require(isinstance(row, dict), f"dataset {ds_id!r}: rows must be objects")

    declared = obj.get("fields", [])
    _require(isinstance(declared, list), f"dataset {ds_id!r}: fields must be an array")
    fields: list[FieldDef] = []
    seen: set[str] = set()
    for f in declared:
        _require(isinstance(f, dict) and isinstance(f.get("name"), str),
                 f"dataset {ds_id!r}: each field needs a name")
        name = f["name"]
        _require(name not in seen, f"dataset {ds_id!r}: duplicate field {name!r}")
        seen.add(name)
        mtype = f.get("type")
        if mtype is None:
            column = [row.get(name) for row in rows]
            mtype = infer_measure_type(column) if column else "nominal"
        _require(mtype in MEASURE_TYPES,
                 f"dataset {ds_id!r}: field {name!r} has unknown type {mtype!r}")
        fields.append(FieldDef(name=name, measure_type=mtype))

    # Fields present in the data but not declared are inferred.
    if rows:
        for name in rows[0].keys():
            if name not in seen:
                seen.add(name)
                column = [row.get(name) for row in rows]
                fields.append(FieldDef(name=name, measure_type=infer_measure_type(column)))

    if url is not None:
        rows = _coerce_csv_rows(rows, fields)

    table = DataTable(id=ds_id, fields=tuple(fields), rows=tuple(rows), url=url)
    _validate_rows(table)
    return table


def _validate_rows(table: DataTable) -> None:
    for i, row in enumerate(table.rows):
        for f in table.fields:
            _require(f.name in row,
                     f"dataset {table.id!r}: row {i} is missing field {f.name!r}")
            v = row[f.name]
            if v is None:
                continue
            if f.measure_type == "quantitative":
                _require(parse_number(v) is not None,
                         f"dataset {table.id!r}: row {i} field {f.name!r} is not numeric")
            elif f.measure_type == "temporal":
                _require(parse_iso_date(v) is not None,
                         f"dataset {table.id!r}: row {i} field {f.name!r} is not ISO-8601")


def _parse_scale(obj: Any, view_id: str) -> ScaleDef:
    _require(isinstance(obj, dict), f"view {view_id!r}: scales must be objects")
    for key in ("id", "channel", "kind", "field"):
        _require(key in obj, f"view {view_id!r}: scale missing {key!r}")
    _require(obj["channel"] in CHANNELS,
             f"view {view_id!r}: unknown channel {obj['channel']!r}")
    _require(obj["kind"] in ("discrete", "continuous"),
             f"view {view_id!r}: scale kind must be discrete or continuous")
    aggregate = obj.get("aggregate")
    if aggregate is not None:
        _require(aggregate in AGGREGATE_OPS,
                 f"view {view_id!r}: unknown aggregate {aggregate!r}")
    range_extent = obj.get("range")
    if range_extent is not None:
        _require(isinstance(range_extent, list) and len(range_extent) == 2
                 and all(parse_number(v) is not None for v in range_extent),
                 f"view {view_id!r}: scale range must be a [lo, hi] pixel pair")
        range_extent = (_as_pixel(range_extent[0]), _as_pixel(range_extent[1]))
    _require(obj["channel"] not in SPATIAL_CHANNELS or range_extent is not None,
             f"view {view_id!r}: spatial scale {obj['id']!r} needs a pixel range")
    return ScaleDef(
        id=obj["id"],
        channel=obj["channel"],
        domain_kind=obj["kind"],
        field=obj["field"],
        aggregate=aggregate,
        range_extent=range_extent,
    )


def _parse_encoding(obj: Any, mark_id: str, channel: str) -> Encoding:
    _require(isinstance(obj, dict),
             f"mark {mark_id!r}: encoding for {channel!r} must be an object")
    if "signal" in obj:
        _require(isinstance(obj["signal"], str),
                 f"mark {mark_id!r}: signal encoding must name a signal")
        return Encoding(signal=obj["signal"])
    if "scale" in obj or "field" in obj:
        _require(isinstance(obj.get("scale"), str) and isinstance(obj.get("field"), str),
                 f"mark {mark_id!r}: field encoding needs both scale and field")
        return Encoding(scale=obj["scale"], field=obj["field"])
    _require("value" in obj,
             f"mark {mark_id!r}: encoding for {channel!r} needs scale+field, value, or signal")
    return Encoding(value=obj["value"])


def _parse_mark(obj: Any, view_id: str) -> MarkDef:
    _require(isinstance(obj, dict), f"view {view_id!r}: marks must be objects")
    for key in ("id", "type", "dataset"):
        _require(key in obj, f"view {view_id!r}: mark missing {key!r}")
    _require(obj["type"] in MARK_TYPES,
             f"view {view_id!r}: unknown mark type {obj['type']!r}")
    encodings_obj = obj.get("encodings", {})
    _require(isinstance(encodings_obj, dict),
             f"mark {obj['id']!r}: encodings must be an object")
    encodings: dict[str, Encoding] = {}
    for channel, enc in encodings_obj.items():
        _require(channel in CHANNELS, f"mark {obj['id']!r}: unknown channel {channel!r}")
        encodings[channel] = _parse_encoding(enc, obj["id"], channel)
    return MarkDef(
        id=obj["id"],
        mark_type=obj["type"],
        dataset=obj["dataset"],
        encodings=encodings,
    )


def _parse_view(obj: Any) -> ViewDef:
    _require(isinstance(obj, dict), "view entries must be objects")
    _require(isinstance(obj.get("id"), str) and obj["id"], "view needs a string id")
    view_id = obj["id"]
    width = parse_number(obj.get("width"))
    height = parse_number(obj.get("height"))
    _require(width is not None and width > 0, f"view {view_id!r}: width must be > 0")
    _require(height is not None and height > 0, f"view {view_id!r}: height must be > 0")
    width, height = _as_pixel(width), _as_pixel(height)
    scales = tuple(_parse_scale(s, view_id) for s in obj.get("scales", []))
    per_channel: set[str] = set()
    for s in scales:
        if s.channel in SPATIAL_CHANNELS:
            _require(s.channel not in per_channel,
                     f"view {view_id!r}: more than one {s.channel}-scale")
            per_channel.add(s.channel)
    marks = tuple(_parse_mark(m, view_id) for m in obj.get("marks", []))
    return ViewDef(id=view_id, width=width, height=height, scales=scales, marks=marks)


def _resolve(chart: ChartSpec) -> None:
    """Check every cross-reference; ids must be unique chart-wide."""
    ids: dict[str, str] = {}

    def claim(kind: str, ident: str) -> None:
        if ident in ids:
            raise ParseError(
                f"{kind} id {ident!r} collides with a {ids[ident]} id; "
                "ids must be unique across the chart", ref=ident)
        ids[ident] = kind

    for d in chart.datasets:
        claim("dataset", d.id)
    for v in chart.views:
        claim("view", v.id)
        for s in v.scales:
            claim("scale", s.id)
        for m in v.marks:
            claim("mark", m.id)

    for v in chart.views:
        for s in v.scales:
            chart.field_anywhere(s.field)
        for m in v.marks:
            table = chart.dataset(m.dataset)
            for channel, enc in m.encodings.items():
                if enc.kind != "field":
                    continue
                scale = v.scale(enc.scale)  # raises ReferenceError if missing
                if scale.channel != channel:
                    raise ReferenceError(
                        f"mark {m.id!r} binds channel {channel!r} to scale "
                        f"{scale.id!r} declared for channel {scale.channel!r}",
                        ref=scale.id)
                table.field(enc.field)


def load_chart(document: str | Mapping[str, Any], base_dir: Path | str | None = None) -> ChartSpec:
    """Parse, resolve, and validate a chart document.

    ``document`` is JSON text or an already-decoded mapping. ``base_dir``
    anchors relative dataset urls (defaults to the working directory).
    """
    if isinstance(document, str):
        try:
            raw = json.loads(document)
        except json.JSONDecodeError as exc:
            raise ParseError(f"chart document is not valid JSON: {exc}")
    else:
        raw = document
    _require(isinstance(raw, dict), "chart document must be a JSON object")
    version = raw.get("version")
    _require(version == CHART_FORMAT_VERSION,
             f"unsupported chart format version {version!r}")
    base = Path(base_dir) if base_dir is not None else None

    datasets = tuple(_parse_dataset(d, base) for d in raw.get("datasets", []))
    views = tuple(_parse_view(v) for v in raw.get("views", []))
    if not views:
        raise EmptyChart("chart declares zero views")
    chart = ChartSpec(datasets=datasets, views=views)
    _resolve(chart)
    return chart


def save_chart(chart: ChartSpec) -> str:
    """Serialize a ChartSpec back to document text (round-trip partner)."""
    from .jsonio import canonical_json

    return canonical_json(chart.to_dict())


# ---------------------------------------------------------------------------
# Profiling


def aggregate_output_name(op: str, field_name: str) -> str:
    """Name of the derived column an aggregate encoding produces."""
    return "count" if op == "count" else f"{op}_{field_name}"


def backing_fields(chart: ChartSpec, view: ViewDef) -> tuple[FieldDef, ...]:
    """Fields of the datum behind the view's primary mark.

    For plain marks this is every field of the mark's dataset. When the
    mark encodes aggregate scales the rendered datum is an aggregated
    tuple, so the backing fields are the group-by fields followed by the
    derived aggregate columns (e.g. weather, count for a histogram bar).
    """
    if not view.marks:
        return ()
    mark = view.marks[0]
    table = chart.dataset(mark.dataset)

    def field_encodings():
        for channel in CHANNELS:
            enc = mark.encodings.get(channel)
            if enc is not None and enc.kind == "field":
                yield view.scale(enc.scale), enc

    if not any(scale.is_aggregate for scale, _ in field_encodings()):
        return table.fields

    fields: list[FieldDef] = []
    seen: set[str] = set()
    for scale, enc in field_encodings():
        if not scale.is_aggregate and enc.field not in seen:
            seen.add(enc.field)
            fields.append(table.field(enc.field))
    for scale, enc in field_encodings():
        if scale.is_aggregate:
            out = aggregate_output_name(scale.aggregate, enc.field)
            if out not in seen:
                seen.add(out)
                fields.append(FieldDef(name=out, measure_type="quantitative"))
    return tuple(fields)


def _axis_profile(view: ViewDef, channel: str) -> AxisProfile:
    scale = view.scale_for(channel)
    if scale is None:
        return AxisProfile(kind="none", aggregate=False, scale=None)
    return AxisProfile(kind=scale.domain_kind, aggregate=scale.is_aggregate, scale=scale)


def profile_view(chart: ChartSpec, view_id: str) -> ViewProfile:
    """Derive the heuristic-facing profile of one view.

    Encoded fields are listed in mark/channel declaration order with
    (channel, field) pairs deduplicated on first occurrence; aggregate
    encodings contribute no projectable field.
    """
    view = chart.view(view_id)
    mark_types = frozenset(m.mark_type for m in view.marks)

    encoded: list[tuple[str, FieldDef]] = []
    seen: set[tuple[str, str]] = set()
    for mark in view.marks:
        table = chart.dataset(mark.dataset)
        for channel in CHANNELS:
            enc = mark.encodings.get(channel)
            if enc is None or enc.kind != "field":
                continue
            scale = view.scale(enc.scale)
            if scale.is_aggregate:
                continue
            key = (channel, enc.field)
            if key in seen:
                continue
            seen.add(key)
            encoded.append((channel, table.field(enc.field)))

    own_data = {m.dataset for m in view.marks}
    shared = tuple(
        v for v in chart.views
        if v.id != view_id and own_data & {m.dataset for m in v.marks}
    )
    return ViewProfile(
        view=view,
        mark_types=mark_types,
        x_scale=_axis_profile(view, "x"),
        y_scale=_axis_profile(view, "y"),
        encoded_fields=tuple(encoded),
        shared_data_views=shared,
    )

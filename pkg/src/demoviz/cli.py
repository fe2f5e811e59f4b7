"""Command-line front end.

Four commands: suggest, compile, widgets, validate. Results go to stdout as
canonical JSON; every diagnostic goes to stderr. Exit codes: 0 success,
1 domain error (NotExpressible without auto, validation failures, no valid
selection), 2 I/O or document-parse error. Any input path may be ``-`` to
read stdin.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Any

from . import __version__
from .chart import ChartSpec, load_chart
from .compiler import compile_vega, compile_vegalite, is_expressible_vegalite
from .errors import (
    DemovizError,
    EmptyChart,
    NotExpressible,
    ParseError,
    ReferenceError,
)
from .heuristics import suggest, suggest_widgets
from .interactions import InteractionSet, parse_interactions, validate_set
from .jsonio import canonical_json
from .trace import classify, parse_trace

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_IO = 2

_LOAD_ERRORS = (ParseError, ReferenceError, EmptyChart)


class _InputError(Exception):
    """Wraps any failure while reading or decoding an input document."""


def _read_input(path: str) -> tuple[str, Path | None]:
    if path == "-":
        return sys.stdin.read(), None
    p = Path(path)
    try:
        return p.read_text(encoding="utf-8"), p.parent
    except OSError as exc:
        raise _InputError(f"cannot read {path!r}: {exc}")


def _load_chart_file(path: str) -> ChartSpec:
    text, base = _read_input(path)
    try:
        return load_chart(text, base_dir=base)
    except _LOAD_ERRORS as exc:
        raise _InputError(f"chart {path!r}: {exc.message}")


def _load_trace_file(path: str):
    text, _ = _read_input(path)
    try:
        return parse_trace(text)
    except ParseError as exc:
        raise _InputError(f"trace {path!r}: {exc.message}")


def _load_interactions_file(path: str) -> InteractionSet:
    text, _ = _read_input(path)
    try:
        return parse_interactions(text)
    except ParseError as exc:
        raise _InputError(f"interactions {path!r}: {exc.message}")


def _cmd_suggest(args: argparse.Namespace) -> int:
    chart = _load_chart_file(args.chart)
    events = _load_trace_file(args.trace)
    demos = classify(events)
    if not demos:
        raise DemovizError("trace holds no demonstrations")
    # The most recent demonstration drives the suggestions.
    result = suggest(chart, demos[-1])
    sys.stdout.write(canonical_json(result.to_dict()))
    return EXIT_OK


def _cmd_compile(args: argparse.Namespace) -> int:
    chart = _load_chart_file(args.chart)
    interactions = _load_interactions_file(args.interactions)
    target = args.target
    if target == "vega-lite":
        compiled = compile_vegalite(chart, interactions)
    elif target == "vega":
        compiled = compile_vega(chart, interactions)
    else:  # auto: prefer Vega-Lite, fall back to Vega with a note
        blockers = is_expressible_vegalite(interactions, chart)
        if blockers:
            for entry in blockers:
                print(f"note: falling back to Vega: {entry['message']}",
                      file=sys.stderr)
            compiled = compile_vega(chart, interactions, expressibility=blockers)
        else:
            compiled = compile_vegalite(chart, interactions)
    sys.stdout.write(compiled.text)
    return EXIT_OK


def _cmd_widgets(args: argparse.Namespace) -> int:
    chart = _load_chart_file(args.chart)
    result = suggest_widgets(chart, args.field)
    sys.stdout.write(canonical_json(result.to_dict()))
    return EXIT_OK


def _cmd_validate(args: argparse.Namespace) -> int:
    chart = _load_chart_file(args.chart)
    report_doc: dict[str, Any] = {"version": 1, "valid": True, "violations": []}
    if args.interactions:
        interactions = _load_interactions_file(args.interactions)
        report = validate_set(chart, interactions)
        report_doc.update(report.to_dict())
    sys.stdout.write(canonical_json(report_doc))
    return EXIT_OK if report_doc["valid"] else EXIT_DOMAIN


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="demoviz",
        description="Suggest and compile chart interactions from demonstrations.",
    )
    parser.add_argument("--version", action="version", version=f"demoviz {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("suggest", help="interpret a demonstration trace")
    p.add_argument("--chart", required=True, help="chart document (or -)")
    p.add_argument("--trace", required=True, help="input-event trace (or -)")
    p.set_defaults(fn=_cmd_suggest)

    p = sub.add_parser("compile", help="compile interactions to a target grammar")
    p.add_argument("--chart", required=True)
    p.add_argument("--interactions", required=True)
    p.add_argument("--target", choices=["vega-lite", "vega", "auto"], default="auto")
    p.set_defaults(fn=_cmd_compile)

    p = sub.add_parser("widgets", help="suggest query widgets for a field")
    p.add_argument("--chart", required=True)
    p.add_argument("--field", required=True)
    p.set_defaults(fn=_cmd_widgets)

    p = sub.add_parser("validate", help="validate a chart and optional interactions")
    p.add_argument("--chart", required=True)
    p.add_argument("--interactions")
    p.set_defaults(fn=_cmd_validate)
    return parser


def run(argv: list[str]) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_IO if exc.code not in (0, None) else EXIT_OK
    try:
        return args.fn(args)
    except _InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except NotExpressible as exc:
        print(f"error: {exc.message}", file=sys.stderr)
        for entry in exc.report:
            print(f"  blocker [{entry['code']}]: {entry['message']}", file=sys.stderr)
        return EXIT_DOMAIN
    except DemovizError as exc:
        print(f"error [{exc.code}]: {exc.message}", file=sys.stderr)
        return EXIT_DOMAIN


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()

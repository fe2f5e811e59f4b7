"""Stateless HTTP facade over the engine.

Every request carries full state (chart, trace, interactions); the handlers
just decode, call the pure engine functions, and re-encode with the same
canonical serializer the CLI uses, so responses are byte-stable.
"""

from __future__ import annotations

import argparse
import json
from functools import lru_cache
from typing import Any

from fastapi import FastAPI, Request, Response
from fastapi.middleware.cors import CORSMiddleware

from . import __version__
from .chart import load_chart
from .compiler import compile_vega, compile_vegalite, fingerprints, is_expressible_vegalite
from .errors import DemovizError, NotExpressible
from .heuristics import suggest, suggest_widgets
from .interactions import parse_interactions, validate_set
from .jsonio import canonical_bytes
from .trace import classify, parse_trace

DEFAULT_HOST = "127.0.0.1"
DEFAULT_PORT = 7878


def _json_response(payload: Any, status: int = 200) -> Response:
    return Response(content=canonical_bytes(payload), status_code=status,
                    media_type="application/json")


def _error_response(status: int, code: str, message: str,
                    details: Any = None) -> Response:
    return _json_response(
        {"code": code, "message": message, "details": details}, status)


def create_app() -> FastAPI:
    app = FastAPI(title="demoviz service", version=__version__)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    async def _body(request: Request) -> dict[str, Any] | Response:
        try:
            raw = await request.body()
            body = json.loads(raw)
        except (json.JSONDecodeError, UnicodeDecodeError) as exc:
            return _error_response(400, "MalformedBody", f"request body is not JSON: {exc}")
        if not isinstance(body, dict):
            return _error_response(400, "MalformedBody", "request body must be a JSON object")
        return body

    @app.post("/api/suggest")
    async def api_suggest(request: Request) -> Response:
        body = await _body(request)
        if isinstance(body, Response):
            return body
        try:
            chart = load_chart(body.get("chart", {}))
            events = parse_trace(body.get("trace", []))
            demos = classify(events)
            result = suggest(chart, demos[-1])
        except DemovizError as exc:
            return _error_response(422, exc.code, exc.message)
        return _json_response(result.to_dict())

    @lru_cache(maxsize=128)
    def _compile_cached(raw_body: bytes) -> tuple[int, bytes]:
        """Pure body -> response mapping; caching cannot change responses.

        The engine's own schema self-check is skipped here: the compilers
        are covered by full-document validation in the test suite, and
        thumbnail rendering in the UI issues bursts of compile calls.
        """
        try:
            body = json.loads(raw_body)
        except (json.JSONDecodeError, UnicodeDecodeError) as exc:
            return 400, canonical_bytes({"code": "MalformedBody",
                                         "message": f"request body is not JSON: {exc}",
                                         "details": None})
        if not isinstance(body, dict):
            return 400, canonical_bytes({"code": "MalformedBody",
                                         "message": "request body must be a JSON object",
                                         "details": None})

        def error(status: int, code: str, message: str, details: Any = None):
            return status, canonical_bytes(
                {"code": code, "message": message, "details": details})

        target = body.get("target", "auto")
        if target not in ("vega-lite", "vega", "auto"):
            return error(422, "UnknownTarget", f"unknown compile target {target!r}")
        try:
            chart = load_chart(body.get("chart", {}))
            interactions = parse_interactions(
                body.get("interactions", {"version": 1}))
            report = validate_set(chart, interactions)
            if not report.ok:
                return error(422, "ValidationFailed",
                             "interactions do not validate against the chart",
                             details=[v.to_dict() for v in report.violations])
            if target == "vega-lite":
                compiled = compile_vegalite(chart, interactions, check_schema=False)
            elif target == "vega":
                compiled = compile_vega(chart, interactions, check_schema=False)
            else:
                blockers = is_expressible_vegalite(interactions, chart)
                if blockers:
                    compiled = compile_vega(chart, interactions,
                                            expressibility=blockers,
                                            check_schema=False)
                else:
                    compiled = compile_vegalite(chart, interactions,
                                                check_schema=False)
        except NotExpressible as exc:
            return error(409, exc.code, exc.message, details=exc.report)
        except DemovizError as exc:
            return error(422, exc.code, exc.message)
        if body.get("format") == "document":
            # Raw document bytes, identical to the CLI's compile output.
            return 200, canonical_bytes(compiled.document)
        return 200, canonical_bytes({"version": 1, **compiled.to_dict()})

    @app.post("/api/compile")
    async def api_compile(request: Request) -> Response:
        status, content = _compile_cached(await request.body())
        return Response(content=content, status_code=status,
                        media_type="application/json")

    @app.post("/api/widgets")
    async def api_widgets(request: Request) -> Response:
        body = await _body(request)
        if isinstance(body, Response):
            return body
        try:
            chart = load_chart(body.get("chart", {}))
            result = suggest_widgets(chart, str(body.get("field", "")))
        except DemovizError as exc:
            return _error_response(422, exc.code, exc.message)
        return _json_response(result.to_dict())

    @app.get("/api/health")
    async def api_health() -> Response:
        return _json_response({
            "version": __version__,
            "schemas": fingerprints(),
        })

    return app


app = create_app()


def main() -> None:
    import uvicorn

    parser = argparse.ArgumentParser(prog="demoviz-service")
    parser.add_argument("--host", default=DEFAULT_HOST)
    parser.add_argument("--port", type=int, default=DEFAULT_PORT)
    parser.add_argument("--workers", type=int, default=1,
                        help="worker processes (the service is stateless)")
    args = parser.parse_args()
    if args.workers > 1:
        uvicorn.run("demoviz.service:app", host=args.host, port=args.port,
                    workers=args.workers, log_level="warning")
    else:
        uvicorn.run(app, host=args.host, port=args.port, log_level="warning")


if __name__ == "__main__":
    main()

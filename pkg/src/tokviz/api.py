"""HTTP service: upload-and-tokenize, scheme discovery, health."""

from __future__ import annotations

import json

from fastapi import FastAPI, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from starlette.datastructures import UploadFile

from . import __version__
from .payload import document_bytes, tokenize_document
from .quantize import ConfigError, GridConfig, NonIntegerBarLength, config_field_schema
from .smf import SmfError
from .tokenizers import SCHEME_ORDER, compound_width, resolve_scheme, token_types

DEFAULT_MAX_UPLOAD_BYTES = 5 * 1024 * 1024


def _config_error(status: int, type_: str, field: str, reason: str) -> JSONResponse:
    return JSONResponse(
        {"error": {"type": type_, "field": field, "reason": reason}}, status_code=status
    )


def _request_error(status: int, type_: str, message: str) -> JSONResponse:
    return JSONResponse(
        {"error": {"type": type_, "message": message}}, status_code=status
    )


def create_app(
    max_upload_bytes: int = DEFAULT_MAX_UPLOAD_BYTES,
    cors_origin: str | None = None,
) -> FastAPI:
    app = FastAPI(title="tokviz", version=__version__, docs_url=None, redoc_url=None)
    if cors_origin:
        app.add_middleware(
            CORSMiddleware,
            allow_origins=[cors_origin],
            allow_methods=["*"],
            allow_headers=["*"],
        )

    @app.post("/api/tokenize")
    async def tokenize_endpoint(request: Request) -> Response:
        # parsed by hand so every failure lands in this module's error
        # taxonomy rather than the framework's
        try:
            form = await request.form()
        except Exception:
            return _request_error(400, "BadRequest", "unreadable multipart body")
        part = form.get("file")
        if not isinstance(part, UploadFile):
            return _request_error(400, "BadRequest", "missing file part")
        midi_bytes = await part.read()
        if len(midi_bytes) > max_upload_bytes:
            return _request_error(
                413, "PayloadTooLarge", f"file exceeds {max_upload_bytes} bytes"
            )

        scheme = form.get("scheme")
        if not isinstance(scheme, str):
            return _config_error(422, "UnknownScheme", "scheme", "missing scheme part")
        try:
            scheme = resolve_scheme(scheme)
        except ValueError as exc:
            return _config_error(422, "UnknownScheme", "scheme", str(exc))

        config_part = form.get("config")
        try:
            config = _parse_config(config_part)
        except ConfigError as exc:
            return _config_error(422, "ConfigError", exc.field, exc.reason)

        try:
            doc = tokenize_document(midi_bytes, scheme, config)
        except SmfError as exc:
            return _request_error(400, type(exc).__name__, str(exc))
        except NonIntegerBarLength as exc:
            return _config_error(422, "NonIntegerBarLength", "positionsPerBeat", str(exc))
        return Response(document_bytes(doc), media_type="application/json")

    @app.get("/api/tokenizers")
    def tokenizers_endpoint() -> JSONResponse:
        return JSONResponse(
            [
                {
                    "scheme": scheme,
                    "tokenTypes": list(token_types(scheme)),
                    "compoundWidth": compound_width(scheme),
                    "configSchema": config_field_schema(),
                }
                for scheme in SCHEME_ORDER
            ]
        )

    @app.get("/healthz")
    def healthz_endpoint() -> JSONResponse:
        return JSONResponse({"status": "ok", "version": __version__})

    return app


def _parse_config(part) -> GridConfig:
    """Decode the optional `config` multipart part."""
    if part is None or (isinstance(part, str) and not part.strip()):
        return GridConfig()
    if not isinstance(part, str):
        raise ConfigError("config", "must be a JSON text part, not a file")
    try:
        mapping = json.loads(part)
    except ValueError:
        raise ConfigError("config", "not valid JSON") from None
    if not isinstance(mapping, dict):
        raise ConfigError("config", "must be a JSON object")
    return GridConfig.from_mapping(mapping)

"""Command line front door: tokenize, inspect, serve.

Exit codes: 0 ok, 2 bad arguments (argparse), 3 unreadable or unparseable
input, 4 config error, 5 bind failure.
"""

from __future__ import annotations

import argparse
import json
import os
import socket
import sys

from .api import DEFAULT_MAX_UPLOAD_BYTES, create_app
from .payload import document_bytes, metadata_document, tokenize_document
from .quantize import ConfigError, GridConfig, NonIntegerBarLength
from .score import build_score, extract_metadata
from .smf import SmfError, parse_smf
from .tokenizers import resolve_scheme

DEFAULT_PORT = 8711

EXIT_OK = 0
EXIT_INPUT = 3
EXIT_CONFIG = 4
EXIT_BIND = 5


def _scheme_argument(value: str) -> str:
    try:
        return resolve_scheme(value)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tokviz", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    tok = sub.add_parser("tokenize", help="tokenize a MIDI file to a JSON document")
    tok.add_argument("--scheme", required=True, type=_scheme_argument,
                     help="one of REMI, TSD, MIDILike, Structured, CPWord, Octuple")
    tok.add_argument("--input", required=True, help="path to a .mid file")
    tok.add_argument("--set", dest="overrides", action="append", default=[],
                     metavar="KEY=VALUE", help="grid config override, repeatable")
    tok.add_argument("--output", help="write the document here instead of stdout")

    ins = sub.add_parser("inspect", help="print score metadata")
    ins.add_argument("--input", required=True, help="path to a .mid file")
    ins.add_argument("--json", action="store_true", help="emit the metadata document")

    srv = sub.add_parser("serve", help="run the HTTP service")
    srv.add_argument("--port", type=int, default=None,
                     help=f"listen port (default {DEFAULT_PORT}, env TOKVIZ_PORT)")
    srv.add_argument("--host", default=None,
                     help="bind address (default 127.0.0.1, env TOKVIZ_HOST)")
    srv.add_argument("--max-upload-bytes", type=int, default=None,
                     help="upload cap (env TOKVIZ_MAX_UPLOAD_BYTES)")
    srv.add_argument("--cors-origin", default=None,
                     help="allowed browser origin (env TOKVIZ_CORS_ORIGIN)")
    return parser


def _fail(code: int, message: str) -> int:
    print(f"tokviz: {message}", file=sys.stderr)
    return code


def _config_from_overrides(overrides: list[str]) -> GridConfig:
    mapping = {}
    for item in overrides:
        key, eq, text = item.partition("=")
        if not eq:
            raise ConfigError(item, "expected KEY=VALUE")
        try:
            mapping[key] = json.loads(text)
        except ValueError:
            raise ConfigError(key, f"cannot parse value {text!r}") from None
    return GridConfig.from_mapping(mapping)


def _cmd_tokenize(args: argparse.Namespace) -> int:
    try:
        with open(args.input, "rb") as handle:
            midi_bytes = handle.read()
    except OSError as exc:
        return _fail(EXIT_INPUT, f"cannot read {args.input}: {exc.strerror}")
    try:
        config = _config_from_overrides(args.overrides)
    except ConfigError as exc:
        return _fail(EXIT_CONFIG, str(exc))
    try:
        doc = tokenize_document(midi_bytes, args.scheme, config)
    except SmfError as exc:
        return _fail(EXIT_INPUT, str(exc))
    except NonIntegerBarLength as exc:
        return _fail(EXIT_CONFIG, f"positionsPerBeat: {exc}")
    body = document_bytes(doc)
    if args.output:
        with open(args.output, "wb") as handle:
            handle.write(body)
    else:
        sys.stdout.buffer.write(body)
        sys.stdout.buffer.flush()
    return EXIT_OK


def _cmd_inspect(args: argparse.Namespace) -> int:
    try:
        with open(args.input, "rb") as handle:
            midi_bytes = handle.read()
    except OSError as exc:
        return _fail(EXIT_INPUT, f"cannot read {args.input}: {exc.strerror}")
    try:
        score = build_score(parse_smf(midi_bytes))
    except SmfError as exc:
        return _fail(EXIT_INPUT, str(exc))
    if args.json:
        sys.stdout.buffer.write(document_bytes(metadata_document(score)))
        sys.stdout.buffer.flush()
        return EXIT_OK
    print(_describe(score))
    return EXIT_OK


def _describe(score) -> str:
    meta = extract_metadata(score)
    parts = []
    if meta.note_count:
        parts.append(f"pitch range {meta.pitch_min}–{meta.pitch_max}")
    parts.append(f"{meta.note_count} notes")
    parts.append(f"{meta.duration_seconds:g} s")
    parts.append(f"{meta.tempo_map[0].bpm:g} bpm")
    first_sig = meta.time_sig_map[0]
    parts.append(f"{first_sig.numerator}/{first_sig.denominator}")
    return ", ".join(parts)


def _env_or(flag, name: str, fallback, convert=str):
    if flag is not None:
        return flag
    value = os.environ.get(name)
    if value is not None:
        return convert(value)
    return fallback


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    port = _env_or(args.port, "TOKVIZ_PORT", DEFAULT_PORT, int)
    host = _env_or(args.host, "TOKVIZ_HOST", "127.0.0.1")
    max_upload = _env_or(
        args.max_upload_bytes, "TOKVIZ_MAX_UPLOAD_BYTES", DEFAULT_MAX_UPLOAD_BYTES, int
    )
    cors_origin = _env_or(args.cors_origin, "TOKVIZ_CORS_ORIGIN", None)

    # bind before uvicorn spins up so an occupied port is a clean exit 5
    sock = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    sock.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
    try:
        sock.bind((host, port))
    except OSError as exc:
        sock.close()
        return _fail(EXIT_BIND, f"cannot bind {host}:{port}: {exc.strerror}")

    app = create_app(max_upload_bytes=max_upload, cors_origin=cors_origin)
    server = uvicorn.Server(uvicorn.Config(app, log_level="info"))
    server.run(sockets=[sock])
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "tokenize":
        return _cmd_tokenize(args)
    if args.command == "inspect":
        return _cmd_inspect(args)
    return _cmd_serve(args)


def entrypoint() -> None:
    sys.exit(main(sys.argv[1:]))

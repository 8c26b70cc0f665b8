#!/usr/bin/env python3
"""Regenerate the committed golden token streams and the frontend fixtures.

Every stream is checked against the hand-derived traces frozen in
tests/test_tokenizers.py before anything is written, so an implementation
regression cannot silently overwrite the fixtures with its own output.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "tests"))

from test_tokenizers import GOLDEN_TRACES, _render  # noqa: E402

from tokviz.payload import tokenize_document  # noqa: E402
from tokviz.quantize import GridConfig, quantize  # noqa: E402
from tokviz.score import build_score  # noqa: E402
from tokviz.smf import parse_smf  # noqa: E402
from tokviz.tokenizers import SCHEME_ORDER, detokenize, tokenize  # noqa: E402

FRONTEND_FIXTURES = ROOT / "frontend" / "tests" / "fixtures"


def _check_against_frozen_traces(golden: bytes) -> None:
    q = quantize(build_score(parse_smf(golden)), GridConfig())
    for scheme in SCHEME_ORDER:
        stream, _ = tokenize(scheme, q, 0)
        rendered = [_render(t) for t in stream.tokens]
        if rendered != GOLDEN_TRACES[scheme]:
            raise SystemExit(f"{scheme} diverged from the frozen trace: {rendered}")
        back = detokenize(scheme, stream, q.config, q.bar_map)
        if back != list(q.tracks[0].notes):
            raise SystemExit(f"{scheme} no longer round-trips the golden fixture")


def main() -> None:
    golden = (ROOT / "tests" / "data" / "golden.mid").read_bytes()
    _check_against_frozen_traces(golden)

    streams = {}
    for scheme in SCHEME_ORDER:
        doc = tokenize_document(golden, scheme, GridConfig())
        track = doc["tracks"][0]
        streams[scheme] = {
            "tokens": track["tokens"],
            "noteToTokens": track["noteToTokens"],
            "tokenToNote": track["tokenToNote"],
            "vocabulary": track["vocabulary"],
        }
    out = ROOT / "tests" / "data" / "golden_streams.json"
    out.write_text(json.dumps(streams, indent=2, ensure_ascii=False) + "\n")
    print(f"wrote {out}")

    FRONTEND_FIXTURES.mkdir(parents=True, exist_ok=True)
    for scheme in SCHEME_ORDER:
        doc = tokenize_document(golden, scheme, GridConfig())
        path = FRONTEND_FIXTURES / f"{scheme.lower()}.json"
        path.write_text(json.dumps(doc, indent=2, ensure_ascii=False) + "\n")
        print(f"wrote {path}")
    coarse = tokenize_document(golden, "REMI", GridConfig(positions_per_beat=4))
    path = FRONTEND_FIXTURES / "remi-ppb4.json"
    path.write_text(json.dumps(coarse, indent=2, ensure_ascii=False) + "\n")
    print(f"wrote {path}")

    from fastapi.testclient import TestClient

    from tokviz.api import create_app

    descriptors = TestClient(create_app()).get("/api/tokenizers").json()
    path = FRONTEND_FIXTURES / "tokenizers.json"
    path.write_text(json.dumps(descriptors, indent=2, ensure_ascii=False) + "\n")
    print(f"wrote {path}")


if __name__ == "__main__":
    main()

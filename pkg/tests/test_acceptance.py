"""End-to-end acceptance suite.

Each test checks one contract-level property at its stated tolerance and
prints a single PASS/FAIL line so the suite doubles as a release report:

  python3 -m pytest tests/test_acceptance.py -q
"""

from __future__ import annotations

import json
import random
import subprocess
import sys
import time
from pathlib import Path

import pytest
from fastapi.testclient import TestClient

from generators import random_quantized_score, random_raw_midi
from tokviz.api import create_app
from tokviz.payload import tokenize_document
from tokviz.quantize import GridConfig, quantize
from tokviz.score import build_score
from tokviz.smf import (
    EventKind,
    RawEvent,
    RawMidiFile,
    RawTrack,
    SmfError,
    encode_smf,
    parse_smf,
)
from tokviz.tokenizers import SCHEME_ORDER, CompoundToken, detokenize, tokenize

DATA = Path(__file__).parent / "data"
SUITE_SEED = 0x5CA1E
SUITE_SIZE = 1000


def _report(capsys, ok: bool, name: str, detail: str) -> None:
    with capsys.disabled():
        print(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")


@pytest.fixture(scope="module")
def suite() -> list:
    rng = random.Random(SUITE_SEED)
    return [random_quantized_score(rng) for _ in range(SUITE_SIZE)]


def test_smf_codec_round_trip_and_fuzz(capsys):
    start = time.perf_counter()
    rng = random.Random(0xACC1)
    mismatches = 0
    for _ in range(1000):
        midi = random_raw_midi(rng)
        parsed = parse_smf(encode_smf(midi))
        same = (
            parsed.format == midi.format
            and parsed.ticks_per_quarter == midi.ticks_per_quarter
            and parsed.warnings == ()
            and len(parsed.tracks) == len(midi.tracks)
            and all(
                got.events == want.events and got.end_tick == want.end_tick
                for got, want in zip(parsed.tracks, midi.tracks)
            )
        )
        mismatches += 0 if same else 1
    crashes = 0
    for _ in range(100_000):
        data = rng.randbytes(rng.randint(0, 64))
        if rng.random() < 0.5:
            data = b"MThd" + data
        try:
            parse_smf(data)
        except SmfError:
            pass
        except Exception:
            crashes += 1
    elapsed = time.perf_counter() - start
    ok = mismatches == 0 and crashes == 0 and elapsed < 60
    _report(
        capsys,
        ok,
        "smf codec",
        f"1000 file round trips, 100000 fuzz inputs, {elapsed:.1f}s (limit 60s)",
    )
    assert mismatches == 0
    assert crashes == 0
    assert elapsed < 60


def test_golden_streams_for_all_schemes(capsys, golden_bytes):
    fixture = json.loads((DATA / "golden_streams.json").read_text())
    diffs = []
    docs = {}
    for scheme in SCHEME_ORDER:
        docs[scheme] = tokenize_document(golden_bytes, scheme, GridConfig())
        track = docs[scheme]["tracks"][0]
        for key in ("tokens", "noteToTokens", "tokenToNote", "vocabulary"):
            if track[key] != fixture[scheme][key]:
                diffs.append(f"{scheme}.{key}")
    remi = docs["REMI"]["tracks"][0]
    rendered = [f"{t['type']}_{t['value']}" for t in remi["tokens"]]
    expected = [
        "Bar_None",
        "Position_0",
        "Pitch_60",
        "Velocity_99",
        "Duration_8",
        "Position_8",
        "Pitch_64",
        "Velocity_99",
        "Duration_4",
    ]
    trace_ok = rendered == expected and remi["noteToTokens"] == {
        "0": [2, 3, 4],
        "1": [6, 7, 8],
    }
    ok = not diffs and trace_ok
    _report(capsys, ok, "golden streams", f"6 schemes vs committed fixture, diffs: {diffs}")
    assert trace_ok, rendered
    assert not diffs


def test_tokenizer_round_trip(capsys, suite):
    start = time.perf_counter()
    mismatches = clamped = cases = 0
    for q in suite:
        for track in q.tracks:
            for scheme in SCHEME_ORDER:
                cases += 1
                stream, _ = tokenize(scheme, q, track.track_index)
                if scheme == "Structured" and stream.warnings:
                    clamped += 1
                    continue
                if detokenize(scheme, stream, q.config, q.bar_map) != list(track.notes):
                    mismatches += 1
    elapsed = time.perf_counter() - start
    clamp_rate = clamped / (cases / len(SCHEME_ORDER))
    ok = mismatches == 0 and clamp_rate < 0.01 and elapsed < 120
    _report(
        capsys,
        ok,
        "tokenizer round trip",
        f"{cases} cases exact, {clamped} Structured clamps excluded "
        f"({clamp_rate:.2%}), {elapsed:.1f}s (limit 120s)",
    )
    assert mismatches == 0
    assert clamp_rate < 0.01
    assert elapsed < 120


def test_structural_counts(capsys, suite):
    violations = 0
    for q in suite:
        for track in q.tracks:
            n = len(track.notes)
            structured, _ = tokenize("Structured", q, track.track_index)
            if len(structured.tokens) != 4 * n:
                violations += 1
            octuple, _ = tokenize("Octuple", q, track.track_index)
            if len(octuple.tokens) != n or not all(
                isinstance(t, CompoundToken) and len(t.cells) == 8 for t in octuple.tokens
            ):
                violations += 1
            remi, _ = tokenize("REMI", q, track.track_index)
            bars = sum(1 for t in remi.tokens if t.type == "Bar")
            positions = sum(1 for t in remi.tokens if t.type == "Position")
            cpword, _ = tokenize("CPWord", q, track.track_index)
            if len(cpword.tokens) != bars + positions + n:
                violations += 1
    _report(
        capsys,
        violations == 0,
        "structural counts",
        f"Structured 4N, Octuple N width-8, CPWord framing over {SUITE_SIZE} scores, "
        f"{violations} violations",
    )
    assert violations == 0


def test_cross_reference_invariants(capsys, suite):
    violations = 0
    for q in suite:
        for track in q.tracks:
            ids = {n.note_id for n in track.notes}
            for scheme in SCHEME_ORDER:
                stream, note_map = tokenize(scheme, q, track.track_index)
                if set(note_map.note_to_tokens) != ids:
                    violations += 1
                    continue
                for note_id, indices in note_map.note_to_tokens.items():
                    if not indices or list(indices) != sorted(set(indices)):
                        violations += 1
                    for index in indices:
                        if not 0 <= index < len(stream.tokens):
                            violations += 1
                        elif (
                            stream.tokens[index].note_id != note_id
                            or note_map.token_to_note.get(index) != note_id
                        ):
                            violations += 1
                for index, note_id in note_map.token_to_note.items():
                    if index not in note_map.note_to_tokens.get(note_id, ()):
                        violations += 1
    _report(
        capsys,
        violations == 0,
        "cross references",
        f"totality and consistency for 6 schemes over {SUITE_SIZE} scores, "
        f"{violations} violations",
    )
    assert violations == 0


def test_api_matches_cli_and_validates_config(capsys, golden_bytes, tmp_path):
    client = TestClient(create_app())
    response = client.post(
        "/api/tokenize",
        files={"file": ("golden.mid", golden_bytes, "audio/midi")},
        data={"scheme": "REMI"},
    )
    path = tmp_path / "golden.mid"
    path.write_bytes(golden_bytes)
    process = subprocess.run(
        [
            sys.executable,
            "-c",
            "from tokviz.cli import entrypoint; entrypoint()",
            "tokenize",
            "--scheme",
            "REMI",
            "--input",
            str(path),
        ],
        capture_output=True,
    )
    bytes_ok = (
        response.status_code == 200
        and process.returncode == 0
        and response.content == process.stdout
    )

    bad = client.post(
        "/api/tokenize",
        files={"file": ("golden.mid", golden_bytes, "audio/midi")},
        data={"scheme": "REMI", "config": json.dumps({"positionsPerBeat": 0})},
    )
    config_ok = (
        bad.status_code == 422 and bad.json()["error"]["field"] == "positionsPerBeat"
    )

    listed = [d["scheme"] for d in client.get("/api/tokenizers").json()]
    listing_ok = listed == list(SCHEME_ORDER) and len(listed) == 6

    ok = bytes_ok and config_ok and listing_ok
    _report(
        capsys,
        ok,
        "api contract",
        f"POST bytes == CLI bytes: {bytes_ok}, 422 names field: {config_ok}, "
        f"6 schemes listed: {listing_ok}",
    )
    assert bytes_ok
    assert config_ok
    assert listing_ok


def test_throughput_10k_notes(capsys):
    events = []
    for i in range(10_000):
        tick = i * 60
        pitch = 36 + i % 64
        events.append(RawEvent(tick, EventKind.NOTE_ON, channel=0, pitch=pitch, velocity=80))
        events.append(RawEvent(tick + 60, EventKind.NOTE_OFF, channel=0, pitch=pitch, velocity=0))
    events.sort(key=lambda e: e.tick)
    data = encode_smf(RawMidiFile(0, 480, (RawTrack(tuple(events), events[-1].tick),), ()))

    start = time.perf_counter()
    q = quantize(build_score(parse_smf(data)), GridConfig())
    stream, _ = tokenize("REMI", q, 0)
    elapsed = time.perf_counter() - start

    ok = elapsed < 1.0 and len(q.tracks[0].notes) == 10_000
    _report(
        capsys,
        ok,
        "throughput",
        f"parse+quantize+tokenize REMI of 10000 notes in {elapsed*1000:.0f}ms "
        f"(limit 1000ms), {len(stream.tokens)} tokens",
    )
    assert len(q.tracks[0].notes) == 10_000
    assert elapsed < 1.0

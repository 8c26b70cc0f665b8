from __future__ import annotations

import json
import random
from importlib import resources

import jsonschema
import pytest
from fastapi.testclient import TestClient

import tokviz
from generators import random_raw_midi
from tokviz.api import create_app
from tokviz.payload import document_bytes, tokenize_document
from tokviz.quantize import GridConfig, config_to_json
from tokviz.smf import (
    EventKind,
    RawEvent,
    RawMidiFile,
    RawTrack,
    encode_smf,
)


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app())


@pytest.fixture(scope="module")
def response_schema():
    text = resources.files("tokviz").joinpath("data/tokenize_response.schema.json").read_text()
    schema = json.loads(text)
    jsonschema.Draft202012Validator.check_schema(schema)
    return schema


def _post(client, midi_bytes: bytes, scheme: str, config: dict | str | None = None):
    data = {"scheme": scheme}
    if config is not None:
        data["config"] = config if isinstance(config, str) else json.dumps(config)
    return client.post("/api/tokenize", files={"file": ("upload.mid", midi_bytes)}, data=data)


def test_healthz(client):
    response = client.get("/healthz")
    assert response.status_code == 200
    assert response.json() == {"status": "ok", "version": tokviz.__version__}


def test_tokenizers_lists_six_schemes_in_stable_order(client):
    response = client.get("/api/tokenizers")
    assert response.status_code == 200
    descriptors = response.json()
    assert [d["scheme"] for d in descriptors] == [
        "REMI",
        "TSD",
        "MIDILike",
        "Structured",
        "CPWord",
        "Octuple",
    ]
    assert [d["compoundWidth"] for d in descriptors] == [0, 0, 0, 0, 5, 8]
    defaults = config_to_json(GridConfig())
    for descriptor in descriptors:
        assert {f["name"]: f["default"] for f in descriptor["configSchema"]} == defaults
        assert descriptor["tokenTypes"]


def test_golden_remi_response(client, golden_bytes):
    response = _post(client, golden_bytes, "REMI")
    assert response.status_code == 200
    track = response.json()["tracks"][0]
    assert [(t["type"], t["value"]) for t in track["tokens"]] == [
        ("Bar", "None"),
        ("Position", "0"),
        ("Pitch", "60"),
        ("Velocity", "99"),
        ("Duration", "8"),
        ("Position", "8"),
        ("Pitch", "64"),
        ("Velocity", "99"),
        ("Duration", "4"),
    ]
    assert track["noteToTokens"] == {"0": [2, 3, 4], "1": [6, 7, 8]}
    assert response.content == document_bytes(
        tokenize_document(golden_bytes, "REMI", GridConfig())
    )


@pytest.mark.parametrize("scheme", ["REMI", "TSD", "MIDILike", "Structured", "CPWord", "Octuple"])
def test_every_scheme_round_trips_through_the_wire(client, golden_bytes, scheme, response_schema):
    response = _post(client, golden_bytes, scheme)
    assert response.status_code == 200
    doc = response.json()
    jsonschema.validate(doc, response_schema)
    track = doc["tracks"][0]
    if scheme in ("CPWord", "Octuple"):
        assert "cells" in track["tokens"][0]
    else:
        assert "value" in track["tokens"][0]
    # every token-referenced note id exists in the notes array
    note_ids = {n["id"] for n in track["notes"]}
    assert set(track["tokenToNote"].values()) <= note_ids


def test_scheme_name_is_case_insensitive(client, golden_bytes):
    lower = _post(client, golden_bytes, "octuple")
    upper = _post(client, golden_bytes, "OCTUPLE")
    assert lower.status_code == upper.status_code == 200
    assert lower.content == upper.content


def test_identical_requests_are_byte_identical(client, golden_bytes):
    first = _post(client, golden_bytes, "CPWord", {"positionsPerBeat": 4})
    second = _post(client, golden_bytes, "CPWord", {"positionsPerBeat": 4})
    assert first.content == second.content


def test_config_key_order_does_not_change_the_body(client, golden_bytes):
    a = _post(client, golden_bytes, "TSD", '{"positionsPerBeat":4,"numVelocityBins":16}')
    b = _post(client, golden_bytes, "TSD", '{"numVelocityBins":16,"positionsPerBeat":4}')
    assert a.status_code == b.status_code == 200
    assert a.content == b.content


def test_missing_file_part_is_400(client):
    response = client.post("/api/tokenize", data={"scheme": "REMI"})
    assert response.status_code == 400
    assert response.json()["error"]["type"] == "BadRequest"


def test_not_midi_is_400_with_parser_error_echoed(client):
    response = _post(client, b"RIFF not a midi file", "REMI")
    assert response.status_code == 400
    error = response.json()["error"]
    assert error["type"] == "BadHeader"
    assert "MThd" in error["message"]


def test_truncated_file_is_400(client, golden_bytes):
    response = _post(client, golden_bytes[:20], "REMI")
    assert response.status_code == 400
    assert response.json()["error"]["type"] == "TruncatedChunk"


def test_oversize_upload_is_413(golden_bytes):
    tiny = TestClient(create_app(max_upload_bytes=32))
    response = _post(tiny, golden_bytes, "REMI")
    assert response.status_code == 413
    assert response.json()["error"]["type"] == "PayloadTooLarge"


@pytest.mark.parametrize(
    "config, field",
    [
        ({"positionsPerBeat": 0}, "positionsPerBeat"),
        ({"numVelocityBins": 0}, "numVelocityBins"),
        ({"numVelocityBins": 128}, "numVelocityBins"),
        ({"pitchMin": 60, "pitchMax": 60}, "pitchMin"),
        ({"tempoMaxBpm": 30, "tempoMinBpm": 40}, "tempoMaxBpm"),
        ({"positionsPerBeat": "8"}, "positionsPerBeat"),
        ({"beatsPerMinute": 120}, "beatsPerMinute"),
    ],
)
def test_invalid_config_is_422_naming_the_field(client, golden_bytes, config, field):
    response = _post(client, golden_bytes, "REMI", config)
    assert response.status_code == 422
    error = response.json()["error"]
    assert error["type"] == "ConfigError"
    assert error["field"] == field
    assert error["reason"]


def test_config_that_is_not_json_is_422(client, golden_bytes):
    response = _post(client, golden_bytes, "REMI", "{not json")
    assert response.status_code == 422
    assert response.json()["error"]["field"] == "config"


def test_config_that_is_not_an_object_is_422(client, golden_bytes):
    response = _post(client, golden_bytes, "REMI", "[1,2]")
    assert response.status_code == 422
    assert response.json()["error"]["field"] == "config"


def test_unknown_scheme_is_422(client, golden_bytes):
    response = _post(client, golden_bytes, "REMI2")
    assert response.status_code == 422
    error = response.json()["error"]
    assert error["type"] == "UnknownScheme"
    assert error["field"] == "scheme"


def test_missing_scheme_part_is_422(client, golden_bytes):
    response = client.post("/api/tokenize", files={"file": ("upload.mid", golden_bytes)})
    assert response.status_code == 422
    assert response.json()["error"]["field"] == "scheme"


def _smf_with_time_sig(numerator: int, denominator: int) -> bytes:
    events = (
        RawEvent(0, EventKind.TIME_SIGNATURE, numerator=numerator, denominator=denominator),
        RawEvent(0, EventKind.NOTE_ON, channel=0, pitch=60, velocity=100),
        RawEvent(480, EventKind.NOTE_OFF, channel=0, pitch=60, velocity=0),
    )
    return encode_smf(RawMidiFile(0, 480, (RawTrack(events, 480),), ()))


def test_fractional_bar_length_is_422_blaming_positions_per_beat(client):
    midi = _smf_with_time_sig(4, 32)
    ok = _post(client, midi, "REMI")  # 8 positions per beat tiles 4/32 fine
    assert ok.status_code == 200
    response = _post(client, midi, "REMI", {"positionsPerBeat": 1})
    assert response.status_code == 422
    error = response.json()["error"]
    assert error["type"] == "NonIntegerBarLength"
    assert error["field"] == "positionsPerBeat"


def test_cors_header_present_when_origin_configured(golden_bytes):
    client = TestClient(create_app(cors_origin="http://localhost:5173"))
    response = client.get("/healthz", headers={"Origin": "http://localhost:5173"})
    assert response.headers.get("access-control-allow-origin") == "http://localhost:5173"


def test_fuzzed_valid_uploads_stay_schema_valid(client, response_schema):
    rng = random.Random(0xFEED)
    schemes = ["REMI", "TSD", "MIDILike", "Structured", "CPWord", "Octuple"]
    for i in range(12):
        midi = encode_smf(random_raw_midi(rng, max_tracks=3, max_events=48))
        config = rng.choice(
            [
                None,
                {"positionsPerBeat": rng.choice([1, 2, 4, 8, 12])},
                {"numVelocityBins": rng.choice([1, 8, 127]), "maxDurationBeats": 4},
            ]
        )
        response = _post(client, midi, schemes[i % len(schemes)], config)
        assert response.status_code == 200, response.content
        jsonschema.validate(response.json(), response_schema)

"""Tokenization response documents.

The HTTP service and the CLI both render their JSON through this module so
that identical inputs produce byte-identical output on either path.
"""

from __future__ import annotations

import json

from .quantize import GridConfig, bar_start_units, quantize
from .score import Score, build_score, extract_metadata, seconds_converter
from .smf import parse_smf
from .tokenizers import CompoundToken, resolve_scheme, tokenize, vocabulary_summary

# float repr noise is cut at a precision far beyond musical relevance
_SECONDS_DIGITS = 9
_BPM_DIGITS = 6


def _seconds(value: float) -> float:
    return round(value, _SECONDS_DIGITS)


def metadata_document(score: Score) -> dict:
    meta = extract_metadata(score)
    doc: dict = {}
    if meta.note_count:
        doc["pitchMin"] = meta.pitch_min
        doc["pitchMax"] = meta.pitch_max
    doc["noteCount"] = meta.note_count
    doc["durationSeconds"] = _seconds(meta.duration_seconds)
    doc["tempoMap"] = [
        {"tick": e.tick, "seconds": _seconds(e.seconds), "bpm": round(e.bpm, _BPM_DIGITS)}
        for e in meta.tempo_map
    ]
    doc["timeSigMap"] = [
        {
            "tick": e.tick,
            "seconds": _seconds(e.seconds),
            "numerator": e.numerator,
            "denominator": e.denominator,
        }
        for e in meta.time_sig_map
    ]
    doc["keySigMap"] = [
        {
            "tick": e.tick,
            "seconds": _seconds(e.seconds),
            "sharpsFlats": e.sharps_flats,
            "mode": e.mode,
            "name": e.name,
        }
        for e in meta.key_sig_map
    ]
    doc["trackPitchRanges"] = [
        {
            "trackIndex": track.index,
            "pitchMin": min(n.pitch for n in track.notes),
            "pitchMax": max(n.pitch for n in track.notes),
        }
        for track in score.tracks
        if track.notes
    ]
    return doc


def _token_record(index: int, token) -> dict:
    if isinstance(token, CompoundToken):
        return {
            "index": index,
            "cells": [{"type": t, "value": v} for t, v in token.cells],
            "noteId": token.note_id,
        }
    return {"index": index, "type": token.type, "value": token.value, "noteId": token.note_id}


def tokenize_document(midi_bytes: bytes, scheme: str, config: GridConfig) -> dict:
    """Run the full pipeline and assemble the response document.

    Raises SmfError for unparseable input, ValueError for an unknown
    scheme, and NonIntegerBarLength when the grid cannot tile a bar.
    """
    scheme = resolve_scheme(scheme)
    score = build_score(parse_smf(midi_bytes))
    q = quantize(score, config)
    convert = seconds_converter(score)
    notes_by_id = {n.id: n for t in score.tracks for n in t.notes}

    tracks = []
    warnings = list(q.warnings)
    for score_track, q_track in zip(score.tracks, q.tracks, strict=True):
        stream, note_map = tokenize(scheme, q, q_track.track_index)
        warnings.extend(stream.warnings)
        notes = []
        for qn in q_track.notes:
            source = notes_by_id[qn.note_id]
            notes.append(
                {
                    "id": qn.note_id,
                    "pitch": qn.pitch,
                    "velocity": source.velocity,
                    "startSeconds": _seconds(convert(source.onset_tick)),
                    "endSeconds": _seconds(convert(source.onset_tick + source.duration_ticks)),
                    "startUnits": qn.onset_units,
                    "durationUnits": qn.duration_units,
                    "bar": qn.bar,
                    "position": qn.position,
                }
            )
        tracks.append(
            {
                "trackIndex": q_track.track_index,
                "name": score_track.name,
                "program": "Drums" if q_track.is_drum else q_track.program,
                "notes": notes,
                "tokens": [_token_record(i, t) for i, t in enumerate(stream.tokens)],
                "noteToTokens": {
                    str(note_id): list(indices)
                    for note_id, indices in note_map.note_to_tokens.items()
                },
                "tokenToNote": {
                    str(index): note_id for index, note_id in note_map.token_to_note.items()
                },
                "vocabulary": [
                    {"type": t, "value": v, "count": n} for t, v, n in vocabulary_summary(stream)
                ],
            }
        )

    return {
        "metadata": metadata_document(score),
        "barMap": [
            {
                "barIndex": span.bar_index,
                "startUnits": span.start_units,
                "unitsPerBar": span.units_per_bar,
                "numerator": span.numerator,
                "denominator": span.denominator,
            }
            for span in q.bar_map
        ],
        "barLines": _bar_lines(q, score, convert),
        "tracks": tracks,
        "warnings": warnings,
    }


def _bar_lines(q, score: Score, convert) -> list[dict]:
    """One entry per bar boundary, from bar 0 through the first boundary at
    or past the last note's end."""
    ppb = q.config.positions_per_beat
    tpq = score.ticks_per_quarter
    end_units = max(
        (n.onset_units + n.duration_units for t in q.tracks for n in t.notes), default=0
    )
    lines = []
    bar = 0
    while True:
        units = bar_start_units(q.bar_map, bar)
        lines.append(
            {"bar": bar, "units": units, "seconds": _seconds(convert(units * tpq / ppb))}
        )
        if units >= end_units:
            return lines
        bar += 1


def document_bytes(doc: dict) -> bytes:
    """Canonical serialization: compact separators, UTF-8, insertion order."""
    return json.dumps(doc, separators=(",", ":"), ensure_ascii=False).encode("utf-8")

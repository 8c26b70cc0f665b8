"""TSD: Pitch/Velocity/Duration triples separated by TimeShift tokens."""

from __future__ import annotations

from ..quantize import BarSpan, GridConfig, QuantizedNote, QuantizedScore, units_to_bar_position
from .base import (
    MalformedStream,
    Token,
    TokenStream,
    build_note_map,
    get_track,
    parse_int,
    split_time_shift,
)

SCHEME = "TSD"
TOKEN_TYPES = ("Pitch", "Velocity", "Duration", "TimeShift")


def tokenize(q: QuantizedScore, track_index: int):
    track = get_track(q, track_index)
    max_units = q.config.max_duration_units
    tokens: list[Token] = []
    cursor = 0
    for note in track.notes:
        for step in split_time_shift(note.onset_units - cursor, max_units):
            tokens.append(Token("TimeShift", str(step)))
        cursor = note.onset_units
        tokens.append(Token("Pitch", str(note.pitch), note.note_id))
        tokens.append(Token("Velocity", str(note.velocity_bin), note.note_id))
        tokens.append(Token("Duration", str(note.duration_units), note.note_id))
    stream = TokenStream(SCHEME, track_index, tuple(tokens))
    return stream, build_note_map(stream.tokens)


def detokenize(
    stream: TokenStream, config: GridConfig, bar_map: tuple[BarSpan, ...]
) -> list[QuantizedNote]:
    notes: list[QuantizedNote] = []
    cursor = 0
    tokens = stream.tokens
    i = 0
    while i < len(tokens):
        token = tokens[i]
        kind = getattr(token, "type", None)
        if kind == "TimeShift":
            cursor += parse_int(token, i, "TimeShift")
            i += 1
        elif kind == "Pitch":
            if i + 2 >= len(tokens):
                raise MalformedStream(len(tokens) - 1, "note triple cut short")
            pitch = parse_int(token, i, "Pitch")
            velocity = parse_int(tokens[i + 1], i + 1, "Velocity")
            duration = parse_int(tokens[i + 2], i + 2, "Duration")
            bar, position = units_to_bar_position(bar_map, cursor)
            notes.append(
                QuantizedNote(token.note_id, pitch, velocity, cursor, duration, bar, position)
            )
            i += 3
        else:
            raise MalformedStream(i, f"unexpected token {kind!r}")
    return notes

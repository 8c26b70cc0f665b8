"""Structured: a strict Pitch/Velocity/Duration/TimeShift quadruple per note.

The TimeShift is the gap to the next note's onset (0 when simultaneous and
for the final note) and all four tokens carry the note id.
"""

from __future__ import annotations

from ..quantize import BarSpan, GridConfig, QuantizedNote, QuantizedScore, units_to_bar_position
from .base import MalformedStream, Token, TokenStream, build_note_map, get_track, parse_int

SCHEME = "Structured"
TOKEN_TYPES = ("Pitch", "Velocity", "Duration", "TimeShift")

_ORDER = ("Pitch", "Velocity", "Duration", "TimeShift")


def tokenize(q: QuantizedScore, track_index: int):
    track = get_track(q, track_index)
    max_units = q.config.max_duration_units
    tokens: list[Token] = []
    warnings: list[str] = []
    notes = track.notes
    for i, note in enumerate(notes):
        gap = notes[i + 1].onset_units - note.onset_units if i + 1 < len(notes) else 0
        if gap > max_units:
            warnings.append(
                f"track {track_index}: TimeShift {gap} after note {note.note_id}"
                f" clamped to {max_units}"
            )
            gap = max_units
        tokens.append(Token("Pitch", str(note.pitch), note.note_id))
        tokens.append(Token("Velocity", str(note.velocity_bin), note.note_id))
        tokens.append(Token("Duration", str(note.duration_units), note.note_id))
        tokens.append(Token("TimeShift", str(gap), note.note_id))
    stream = TokenStream(SCHEME, track_index, tuple(tokens), tuple(warnings))
    return stream, build_note_map(stream.tokens)


def detokenize(
    stream: TokenStream, config: GridConfig, bar_map: tuple[BarSpan, ...]
) -> list[QuantizedNote]:
    tokens = stream.tokens
    if len(tokens) % 4:
        raise MalformedStream(len(tokens) - len(tokens) % 4, "incomplete note quadruple")
    notes: list[QuantizedNote] = []
    cursor = 0
    for i in range(0, len(tokens), 4):
        pitch = parse_int(tokens[i], i, "Pitch")
        velocity = parse_int(tokens[i + 1], i + 1, "Velocity")
        duration = parse_int(tokens[i + 2], i + 2, "Duration")
        gap = parse_int(tokens[i + 3], i + 3, "TimeShift")
        bar, position = units_to_bar_position(bar_map, cursor)
        notes.append(
            QuantizedNote(tokens[i].note_id, pitch, velocity, cursor, duration, bar, position)
        )
        cursor += gap
    return notes

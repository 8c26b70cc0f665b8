"""REMI: Bar and Position markers frame Pitch/Velocity/Duration triples."""

from __future__ import annotations

from itertools import groupby

from ..quantize import BarSpan, GridConfig, QuantizedNote, QuantizedScore, bar_start_units, units_to_bar_position
from .base import MalformedStream, Token, TokenStream, build_note_map, get_track, parse_int

SCHEME = "REMI"
TOKEN_TYPES = ("Bar", "Position", "Pitch", "Velocity", "Duration")


def tokenize(q: QuantizedScore, track_index: int) -> tuple[TokenStream, "TokenNoteMap"]:
    track = get_track(q, track_index)
    tokens: list[Token] = []
    if track.notes:
        # Every bar from 0 through the last bar holding a note emits its Bar
        # token, including empty leading and interior bars.
        last_bar = track.notes[-1].bar
        by_bar = {bar: tuple(notes) for bar, notes in groupby(track.notes, key=lambda n: n.bar)}
        for bar in range(last_bar + 1):
            tokens.append(Token("Bar", "None"))
            for position, notes in groupby(by_bar.get(bar, ()), key=lambda n: n.position):
                tokens.append(Token("Position", str(position)))
                for note in notes:
                    tokens.append(Token("Pitch", str(note.pitch), note.note_id))
                    tokens.append(Token("Velocity", str(note.velocity_bin), note.note_id))
                    tokens.append(Token("Duration", str(note.duration_units), note.note_id))
    stream = TokenStream(SCHEME, track_index, tuple(tokens))
    return stream, build_note_map(stream.tokens)


def detokenize(
    stream: TokenStream, config: GridConfig, bar_map: tuple[BarSpan, ...]
) -> list[QuantizedNote]:
    notes: list[QuantizedNote] = []
    bar = -1
    position: int | None = None
    tokens = stream.tokens
    i = 0
    while i < len(tokens):
        token = tokens[i]
        kind = getattr(token, "type", None)
        if kind == "Bar":
            bar += 1
            position = None
            i += 1
        elif kind == "Position":
            if bar < 0:
                raise MalformedStream(i, "Position before any Bar")
            position = parse_int(token, i, "Position")
            i += 1
        elif kind == "Pitch":
            if position is None:
                raise MalformedStream(i, "Pitch outside a Position group")
            if i + 2 >= len(tokens):
                raise MalformedStream(len(tokens) - 1, "note triple cut short")
            pitch = parse_int(token, i, "Pitch")
            velocity = parse_int(tokens[i + 1], i + 1, "Velocity")
            duration = parse_int(tokens[i + 2], i + 2, "Duration")
            onset = bar_start_units(bar_map, bar) + position
            notes.append(
                QuantizedNote(token.note_id, pitch, velocity, onset, duration, bar, position)
            )
            i += 3
        else:
            raise MalformedStream(i, f"unexpected token {kind!r}")
    return notes

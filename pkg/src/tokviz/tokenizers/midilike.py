"""MIDI-Like: NoteOn/NoteOff events with TimeShift tokens in between.

At equal times NoteOff sorts before NoteOn (then by pitch), so back-to-back
same-pitch notes close before they reopen and first-on/first-off pairing
recovers them unambiguously.
"""

from __future__ import annotations

from collections import defaultdict, deque

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

SCHEME = "MIDILike"
TOKEN_TYPES = ("NoteOn", "NoteOff", "Velocity", "TimeShift")

_OFF, _ON = 0, 1


def tokenize(q: QuantizedScore, track_index: int):
    track = get_track(q, track_index)
    max_units = q.config.max_duration_units
    events = []
    for order, note in enumerate(track.notes):
        events.append((note.onset_units, _ON, note.pitch, order, note))
        events.append((note.onset_units + note.duration_units, _OFF, note.pitch, order, note))
    events.sort(key=lambda e: e[:4])
    tokens: list[Token] = []
    cursor = 0
    for time, flag, pitch, _, note in events:
        for step in split_time_shift(time - cursor, max_units):
            tokens.append(Token("TimeShift", str(step)))
        cursor = time
        if flag == _ON:
            tokens.append(Token("NoteOn", str(pitch), note.note_id))
            tokens.append(Token("Velocity", str(note.velocity_bin), note.note_id))
        else:
            tokens.append(Token("NoteOff", str(pitch), note.note_id))
    stream = TokenStream(SCHEME, track_index, tuple(tokens))
    return stream, build_note_map(stream.tokens)


def detokenize(
    stream: TokenStream, config: GridConfig, bar_map: tuple[BarSpan, ...]
) -> list[QuantizedNote]:
    open_notes: dict[int, deque] = defaultdict(deque)
    finished: list[QuantizedNote] = []
    cursor = 0
    tokens = stream.tokens
    i = 0
    while i < len(tokens):
        token = tokens[i]
        kind = getattr(token, "type", None)
        if kind == "TimeShift":
            cursor += parse_int(token, i, "TimeShift")
            i += 1
        elif kind == "NoteOn":
            pitch = parse_int(token, i, "NoteOn")
            if i + 1 >= len(tokens):
                raise MalformedStream(i, "NoteOn without a Velocity")
            velocity = parse_int(tokens[i + 1], i + 1, "Velocity")
            open_notes[pitch].append((cursor, velocity, token.note_id, i))
            i += 2
        elif kind == "NoteOff":
            pitch = parse_int(token, i, "NoteOff")
            if not open_notes[pitch]:
                raise MalformedStream(i, f"NoteOff {pitch} without an open NoteOn")
            onset, velocity, note_id, _ = open_notes[pitch].popleft()
            duration = cursor - onset
            if duration < 1:
                raise MalformedStream(i, "note closes with no duration")
            bar, position = units_to_bar_position(bar_map, onset)
            finished.append(
                QuantizedNote(note_id, pitch, velocity, onset, duration, bar, position)
            )
            i += 1
        elif kind == "Velocity":
            raise MalformedStream(i, "Velocity without a preceding NoteOn")
        else:
            raise MalformedStream(i, f"unexpected token {kind!r}")
    for queue in open_notes.values():
        if queue:
            raise MalformedStream(queue[0][3], "NoteOn never closed")
    finished.sort(key=lambda n: (n.onset_units, n.pitch, n.duration_units))
    return finished

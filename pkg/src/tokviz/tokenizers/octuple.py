"""Octuple: one width-8 compound per note.

Cell order is [Pitch, Velocity, Duration, Position, Bar, Program, Tempo,
TimeSig].  Program renders as the integer or the literal "Drums"; Tempo is
the binned bpm active at the note's onset.
"""

from __future__ import annotations

from ..quantize import BarSpan, GridConfig, QuantizedNote, QuantizedScore, bar_start_units
from .base import CompoundToken, MalformedStream, TokenStream, build_note_map, get_track

SCHEME = "Octuple"
TOKEN_TYPES = ("Pitch", "Velocity", "Duration", "Position", "Bar", "Program", "Tempo", "TimeSig")
WIDTH = 8

_CELL_ORDER = TOKEN_TYPES


def tokenize(q: QuantizedScore, track_index: int):
    track = get_track(q, track_index)
    program = "Drums" if track.is_drum else str(track.program)
    tokens: list[CompoundToken] = []
    for note in track.notes:
        tempo = _tempo_at(q.tempo_bin_map, note.onset_units)
        span = _span_for_bar(q.bar_map, note.bar)
        tokens.append(
            CompoundToken(
                (
                    ("Pitch", str(note.pitch)),
                    ("Velocity", str(note.velocity_bin)),
                    ("Duration", str(note.duration_units)),
                    ("Position", str(note.position)),
                    ("Bar", str(note.bar)),
                    ("Program", program),
                    ("Tempo", str(tempo)),
                    ("TimeSig", f"{span.numerator}/{span.denominator}"),
                ),
                note.note_id,
            )
        )
    stream = TokenStream(SCHEME, track_index, tuple(tokens))
    return stream, build_note_map(stream.tokens)


def _tempo_at(tempo_bin_map, units: int) -> int:
    value = tempo_bin_map[0][1]
    for start, bpm in tempo_bin_map:
        if start <= units:
            value = bpm
        else:
            break
    return value


def _span_for_bar(bar_map: tuple[BarSpan, ...], bar: int) -> BarSpan:
    span = bar_map[0]
    for candidate in bar_map[1:]:
        if candidate.bar_index <= bar:
            span = candidate
        else:
            break
    return span


def detokenize(
    stream: TokenStream, config: GridConfig, bar_map: tuple[BarSpan, ...]
) -> list[QuantizedNote]:
    notes: list[QuantizedNote] = []
    for i, token in enumerate(stream.tokens):
        if not isinstance(token, CompoundToken):
            raise MalformedStream(i, "expected a width-8 compound token")
        if len(token.cells) != WIDTH:
            raise MalformedStream(i, f"compound width {len(token.cells)}, expected {WIDTH}")
        types = tuple(t for t, _ in token.cells)
        if types != _CELL_ORDER:
            raise MalformedStream(i, f"cell order {types}")
        values = {t: v for t, v in token.cells}
        bar = _cell_int(values["Bar"], i, "Bar")
        position = _cell_int(values["Position"], i, "Position")
        onset = bar_start_units(bar_map, bar) + position
        notes.append(
            QuantizedNote(
                token.note_id,
                _cell_int(values["Pitch"], i, "Pitch"),
                _cell_int(values["Velocity"], i, "Velocity"),
                onset,
                _cell_int(values["Duration"], i, "Duration"),
                bar,
                position,
            )
        )
    return notes


def _cell_int(value: str, index: int, what: str) -> int:
    try:
        return int(value)
    except ValueError:
        raise MalformedStream(index, f"{what} cell {value!r} is not an integer") from None

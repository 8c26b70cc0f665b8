"""CPWord: width-5 compounds [Family, Bar/Position, Pitch, Velocity, Duration].

Metric compounds mirror REMI's Bar and Position tokens; Note compounds hold
the pitch triple.  Unused cells are the literal (Ignore, Ignore) pair.
"""

from __future__ import annotations

from itertools import groupby

from ..quantize import BarSpan, GridConfig, QuantizedNote, QuantizedScore, bar_start_units
from .base import CompoundToken, MalformedStream, TokenStream, build_note_map, get_track

SCHEME = "CPWord"
TOKEN_TYPES = ("Family", "Bar", "Position", "Pitch", "Velocity", "Duration", "Ignore")
WIDTH = 5

_IGNORE = ("Ignore", "Ignore")


def _bar_compound() -> CompoundToken:
    return CompoundToken((("Family", "Metric"), ("Bar", "None"), _IGNORE, _IGNORE, _IGNORE))


def _position_compound(position: int) -> CompoundToken:
    return CompoundToken(
        (("Family", "Metric"), ("Position", str(position)), _IGNORE, _IGNORE, _IGNORE)
    )


def _note_compound(note: QuantizedNote) -> CompoundToken:
    return CompoundToken(
        (
            ("Family", "Note"),
            _IGNORE,
            ("Pitch", str(note.pitch)),
            ("Velocity", str(note.velocity_bin)),
            ("Duration", str(note.duration_units)),
        ),
        note.note_id,
    )


def tokenize(q: QuantizedScore, track_index: int):
    track = get_track(q, track_index)
    tokens: list[CompoundToken] = []
    if track.notes:
        last_bar = track.notes[-1].bar
        by_bar = {bar: tuple(ns) for bar, ns in groupby(track.notes, key=lambda n: n.bar)}
        for bar in range(last_bar + 1):
            tokens.append(_bar_compound())
            for position, notes in groupby(by_bar.get(bar, ()), key=lambda n: n.position):
                tokens.append(_position_compound(position))
                for note in notes:
                    tokens.append(_note_compound(note))
    stream = TokenStream(SCHEME, track_index, tuple(tokens))
    return stream, build_note_map(stream.tokens)


def detokenize(
    stream: TokenStream, config: GridConfig, bar_map: tuple[BarSpan, ...]
) -> list[QuantizedNote]:
    notes: list[QuantizedNote] = []
    bar = -1
    position: int | None = None
    for i, token in enumerate(stream.tokens):
        if not isinstance(token, CompoundToken):
            raise MalformedStream(i, "expected a width-5 compound token")
        if len(token.cells) != WIDTH:
            raise MalformedStream(i, f"compound width {len(token.cells)}, expected {WIDTH}")
        if token.cells[0][0] != "Family":
            raise MalformedStream(i, "first cell must be Family")
        family = token.cells[0][1]
        if family == "Metric":
            marker_type, marker_value = token.cells[1]
            if marker_type == "Bar":
                bar += 1
                position = None
            elif marker_type == "Position":
                if bar < 0:
                    raise MalformedStream(i, "Position before any Bar")
                position = _cell_int(marker_value, i, "Position")
            else:
                raise MalformedStream(i, f"Metric compound with {marker_type!r} marker")
        elif family == "Note":
            if position is None:
                raise MalformedStream(i, "Note compound outside a Position group")
            cells = dict(token.cells[2:])
            if set(cells) != {"Pitch", "Velocity", "Duration"}:
                raise MalformedStream(i, "Note compound missing pitch cells")
            onset = bar_start_units(bar_map, bar) + position
            notes.append(
                QuantizedNote(
                    token.note_id,
                    _cell_int(cells["Pitch"], i, "Pitch"),
                    _cell_int(cells["Velocity"], i, "Velocity"),
                    onset,
                    _cell_int(cells["Duration"], i, "Duration"),
                    bar,
                    position,
                )
            )
        else:
            raise MalformedStream(i, f"unknown family {family!r}")
    return notes


def _cell_int(value: str, index: int, what: str) -> int:
    try:
        return int(value)
    except ValueError:
        raise MalformedStream(index, f"{what} cell {value!r} is not an integer") from None

"""Shared token types and stream utilities for all schemes."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..quantize import QuantizedScore, QuantizedTrack


class UnknownTrack(Exception):
    """The requested track index does not exist in the quantized score."""

    def __init__(self, track_index: int):
        super().__init__(f"no track with index {track_index}")
        self.track_index = track_index


class MalformedStream(Exception):
    """A token stream violates its scheme grammar at ``token_index``."""

    def __init__(self, token_index: int, reason: str):
        super().__init__(f"token {token_index}: {reason}")
        self.token_index = token_index
        self.reason = reason


@dataclass(frozen=True, slots=True)
class Token:
    """A simple token; ``value`` is the text rendering of the payload."""

    type: str
    value: str
    note_id: int | None = None


@dataclass(frozen=True, slots=True)
class CompoundToken:
    """A fixed-width token whose cells are (type, value) pairs."""

    cells: tuple[tuple[str, str], ...]
    note_id: int | None = None


@dataclass(frozen=True, slots=True)
class TokenStream:
    scheme: str
    track_index: int
    tokens: tuple[Token | CompoundToken, ...]
    warnings: tuple[str, ...] = ()

    def vocabulary(self) -> list[tuple[str, str]]:
        """Distinct (type, value) pairs in first-appearance order."""
        seen: dict[tuple[str, str], None] = {}
        for pair in _iter_cells(self.tokens):
            seen.setdefault(pair)
        return list(seen)


@dataclass(frozen=True, slots=True)
class TokenNoteMap:
    """Cross-references between token indices and note ids.

    ``token_to_note`` covers exactly the tokens that carry a note id;
    ``note_to_tokens`` lists, in order, every token index attributed to
    each note.
    """

    token_to_note: dict[int, int] = field(default_factory=dict)
    note_to_tokens: dict[int, tuple[int, ...]] = field(default_factory=dict)


def build_note_map(tokens: tuple[Token | CompoundToken, ...]) -> TokenNoteMap:
    token_to_note: dict[int, int] = {}
    note_to_tokens: dict[int, list[int]] = {}
    for index, token in enumerate(tokens):
        if token.note_id is not None:
            token_to_note[index] = token.note_id
            note_to_tokens.setdefault(token.note_id, []).append(index)
    return TokenNoteMap(
        token_to_note, {nid: tuple(idxs) for nid, idxs in note_to_tokens.items()}
    )


def vocabulary_summary(stream: TokenStream) -> list[tuple[str, str, int]]:
    """(type, value, count) in first-appearance order; compound cells count
    individually."""
    counts: dict[tuple[str, str], int] = {}
    for pair in _iter_cells(stream.tokens):
        counts[pair] = counts.get(pair, 0) + 1
    return [(t, v, n) for (t, v), n in counts.items()]


def _iter_cells(tokens):
    for token in tokens:
        if isinstance(token, CompoundToken):
            yield from token.cells
        else:
            yield (token.type, token.value)


def get_track(q: QuantizedScore, track_index: int) -> QuantizedTrack:
    for track in q.tracks:
        if track.track_index == track_index:
            return track
    raise UnknownTrack(track_index)


def split_time_shift(gap: int, max_units: int) -> list[int]:
    """Greedy largest-first decomposition of a gap into TimeShift values."""
    out = []
    while gap > 0:
        step = min(gap, max_units)
        out.append(step)
        gap -= step
    return out


def parse_int(token, index: int, expected_type: str) -> int:
    if isinstance(token, CompoundToken) or token.type != expected_type:
        got = "compound token" if isinstance(token, CompoundToken) else token.type
        raise MalformedStream(index, f"expected {expected_type}, got {got}")
    try:
        return int(token.value)
    except ValueError:
        raise MalformedStream(index, f"{expected_type} value {token.value!r} is not an integer") from None

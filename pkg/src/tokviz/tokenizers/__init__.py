"""Tokenization scheme registry and dispatch."""

from __future__ import annotations

from ..quantize import BarSpan, GridConfig, QuantizedNote, QuantizedScore, units_per_bar
from . import cpword, midilike, octuple, remi, structured, tsd
from .base import (
    CompoundToken,
    MalformedStream,
    Token,
    TokenNoteMap,
    TokenStream,
    UnknownTrack,
    vocabulary_summary,
)

__all__ = [
    "SCHEME_ORDER",
    "CompoundToken",
    "MalformedStream",
    "Token",
    "TokenNoteMap",
    "TokenStream",
    "UnknownTrack",
    "compound_width",
    "detokenize",
    "resolve_scheme",
    "token_types",
    "tokenize",
    "vocabulary_summary",
]

_MODULES = (remi, tsd, midilike, structured, cpword, octuple)
_BY_NAME = {m.SCHEME: m for m in _MODULES}
_BY_FOLDED = {m.SCHEME.casefold(): m for m in _MODULES}

SCHEME_ORDER: tuple[str, ...] = tuple(m.SCHEME for m in _MODULES)


def resolve_scheme(name: str) -> str:
    """Map a case-insensitive scheme name to its canonical spelling."""
    module = _BY_FOLDED.get(name.casefold())
    if module is None:
        valid = ", ".join(SCHEME_ORDER)
        raise ValueError(f"unknown scheme {name!r}, expected one of: {valid}")
    return module.SCHEME


def tokenize(scheme: str, q: QuantizedScore, track_index: int) -> tuple[TokenStream, TokenNoteMap]:
    return _BY_NAME[resolve_scheme(scheme)].tokenize(q, track_index)


def detokenize(
    scheme: str,
    stream: TokenStream,
    config: GridConfig,
    bar_map: tuple[BarSpan, ...] | None = None,
) -> list[QuantizedNote]:
    # Without an explicit bar map, assume uniform 4/4 from unit zero.
    if bar_map is None:
        bar_map = (BarSpan(0, 0, units_per_bar(4, 4, config.positions_per_beat), 4, 4),)
    return _BY_NAME[resolve_scheme(scheme)].detokenize(stream, config, bar_map)


def compound_width(scheme: str) -> int:
    """0 for flat streams, cell count for compound schemes."""
    return getattr(_BY_NAME[resolve_scheme(scheme)], "WIDTH", 0)


def token_types(scheme: str) -> tuple[str, ...]:
    return _BY_NAME[resolve_scheme(scheme)].TOKEN_TYPES

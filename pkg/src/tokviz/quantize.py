"""Grid quantization shared by every tokenization scheme.

Time is measured in grid units of ``1 / positionsPerBeat`` of a quarter
note.  All rounding here is round-half-up.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields
from typing import Any, Mapping, NamedTuple

from .score import Score


class ConfigError(Exception):
    """A grid config field is out of range or malformed."""

    def __init__(self, field: str, reason: str):
        super().__init__(f"{field}: {reason}")
        self.field = field
        self.reason = reason


class NonIntegerBarLength(Exception):
    """A time signature does not produce a whole number of grid units."""

    def __init__(self, numerator: int, denominator: int, positions_per_beat: int):
        super().__init__(
            f"{numerator}/{denominator} at {positions_per_beat} positions per beat"
            " yields a fractional bar length"
        )
        self.numerator = numerator
        self.denominator = denominator
        self.positions_per_beat = positions_per_beat


@dataclass(frozen=True, slots=True)
class GridConfig:
    positions_per_beat: int = 8
    num_velocity_bins: int = 32
    max_duration_beats: int = 16
    pitch_min: int = 21
    pitch_max: int = 108
    num_tempo_bins: int = 32
    tempo_min_bpm: float = 40.0
    tempo_max_bpm: float = 250.0

    @property
    def max_duration_units(self) -> int:
        return self.max_duration_beats * self.positions_per_beat

    def __post_init__(self) -> None:
        for attr, (lo, hi) in _INT_FIELDS.items():
            name = _ATTR_TO_JSON[attr]
            value = _require_int(name, getattr(self, attr), lo, hi)
            object.__setattr__(self, attr, value)
        if self.pitch_min >= self.pitch_max:
            raise ConfigError("pitchMin", "must be less than pitchMax")
        for attr in ("tempo_min_bpm", "tempo_max_bpm"):
            value = _require_float(_ATTR_TO_JSON[attr], getattr(self, attr))
            object.__setattr__(self, attr, value)
        if self.tempo_min_bpm <= 0:
            raise ConfigError("tempoMinBpm", "must be positive")
        if self.tempo_max_bpm <= self.tempo_min_bpm:
            raise ConfigError("tempoMaxBpm", "must exceed tempoMinBpm")

    @classmethod
    def from_mapping(cls, mapping: Mapping[str, Any]) -> "GridConfig":
        """Build a config from camelCase JSON keys, rejecting unknown ones."""
        kwargs = {}
        for key, value in mapping.items():
            attr = _JSON_TO_ATTR.get(key)
            if attr is None:
                raise ConfigError(key, "unknown config field")
            kwargs[attr] = value
        return cls(**kwargs)


# camelCase wire names in declaration order; this is the config's JSON surface.
_JSON_TO_ATTR = {
    "positionsPerBeat": "positions_per_beat",
    "numVelocityBins": "num_velocity_bins",
    "maxDurationBeats": "max_duration_beats",
    "pitchMin": "pitch_min",
    "pitchMax": "pitch_max",
    "numTempoBins": "num_tempo_bins",
    "tempoMinBpm": "tempo_min_bpm",
    "tempoMaxBpm": "tempo_max_bpm",
}
_ATTR_TO_JSON = {attr: key for key, attr in _JSON_TO_ATTR.items()}

# Integer field bounds; None means unbounded above.
_INT_FIELDS: dict[str, tuple[int, int | None]] = {
    "positions_per_beat": (1, None),
    "num_velocity_bins": (1, 127),
    "max_duration_beats": (1, None),
    "pitch_min": (0, 127),
    "pitch_max": (0, 127),
    "num_tempo_bins": (1, None),
}


def config_field_schema() -> list[dict[str, Any]]:
    """Field descriptors (name, type, default, min, max) for the config form."""
    out = []
    for field in fields(GridConfig):
        name = _ATTR_TO_JSON[field.name]
        if field.name in _INT_FIELDS:
            lo, hi = _INT_FIELDS[field.name]
            kind = "integer"
        else:
            lo, hi = 1, None
            kind = "number"
        out.append(
            {"name": name, "type": kind, "default": field.default, "min": lo, "max": hi}
        )
    return out


def config_to_json(config: GridConfig) -> dict[str, Any]:
    return {_ATTR_TO_JSON[f.name]: getattr(config, f.name) for f in fields(GridConfig)}


def _require_int(name: str, value: Any, lo: int, hi: int | None) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        if isinstance(value, float) and value.is_integer():
            value = int(value)
        else:
            raise ConfigError(name, "must be an integer")
    if value < lo or (hi is not None and value > hi):
        bound = f"in [{lo}, {hi}]" if hi is not None else f"at least {lo}"
        raise ConfigError(name, f"must be {bound}")
    return value


def _require_float(name: str, value: Any) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(name, "must be a number")
    if not math.isfinite(value):
        raise ConfigError(name, "must be finite")
    return float(value)


class BarSpan(NamedTuple):
    """Uniform bars of one time signature starting at a bar boundary."""

    bar_index: int
    start_units: int
    units_per_bar: int
    numerator: int
    denominator: int


class QuantizedNote(NamedTuple):
    note_id: int | None
    pitch: int
    velocity_bin: int
    onset_units: int
    duration_units: int
    bar: int
    position: int


@dataclass(frozen=True, slots=True)
class QuantizedTrack:
    track_index: int
    program: int
    is_drum: bool
    notes: tuple[QuantizedNote, ...]


@dataclass(frozen=True, slots=True)
class QuantizedScore:
    config: GridConfig
    tracks: tuple[QuantizedTrack, ...]
    bar_map: tuple[BarSpan, ...]
    tempo_bin_map: tuple[tuple[int, int], ...]  # (startUnits, binned bpm)
    warnings: tuple[str, ...] = ()


def round_half_up(x: float) -> int:
    return math.floor(x + 0.5)


def _div_round_half_up(numerator: int, denominator: int) -> int:
    # floor(n/d + 1/2) in exact integer arithmetic
    return (2 * numerator + denominator) // (2 * denominator)


def velocity_bin_values(num_bins: int) -> list[int]:
    return [_div_round_half_up(i * 127, num_bins) for i in range(1, num_bins + 1)]


def velocity_bin(velocity: int, num_bins: int) -> int:
    """Nearest of the ``num_bins`` velocity bin values, ties taking the larger."""
    best = 0
    best_distance = 128
    for value in velocity_bin_values(num_bins):
        distance = abs(velocity - value)
        if distance < best_distance or (distance == best_distance and value > best):
            best = value
            best_distance = distance
    return best


def tempo_bin_values(config: GridConfig) -> list[float]:
    n = config.num_tempo_bins
    lo, hi = config.tempo_min_bpm, config.tempo_max_bpm
    if n == 1:
        return [lo]
    step = (hi - lo) / (n - 1)
    return [lo + k * step for k in range(n)]


def tempo_bin_bpm(bpm: float, config: GridConfig) -> int:
    """Nearest linear tempo bin, rounded half up to whole bpm."""
    best = -math.inf
    best_distance = math.inf
    for value in tempo_bin_values(config):
        distance = abs(bpm - value)
        if distance < best_distance or (distance == best_distance and value > best):
            best = value
            best_distance = distance
    return round_half_up(best)


def units_per_bar(numerator: int, denominator: int, positions_per_beat: int) -> int:
    total = numerator * positions_per_beat * 4
    if total % denominator:
        raise NonIntegerBarLength(numerator, denominator, positions_per_beat)
    return total // denominator


def units_to_bar_position(bar_map: tuple[BarSpan, ...], units: int) -> tuple[int, int]:
    """Map absolute grid units to (bar index, position within bar)."""
    span = bar_map[0]
    for candidate in bar_map[1:]:
        if candidate.start_units <= units:
            span = candidate
        else:
            break
    offset = units - span.start_units
    return span.bar_index + offset // span.units_per_bar, offset % span.units_per_bar


def bar_start_units(bar_map: tuple[BarSpan, ...], bar: int) -> int:
    """Absolute grid units at which ``bar`` starts."""
    span = bar_map[0]
    for candidate in bar_map[1:]:
        if candidate.bar_index <= bar:
            span = candidate
        else:
            break
    return span.start_units + (bar - span.bar_index) * span.units_per_bar


def _build_bar_map(
    score: Score, config: GridConfig, warnings: list[str]
) -> tuple[BarSpan, ...]:
    ppb = config.positions_per_beat
    tpq = score.ticks_per_quarter
    first = score.time_sig_map[0]
    spans = [
        BarSpan(0, 0, units_per_bar(first.numerator, first.denominator, ppb),
                first.numerator, first.denominator)
    ]
    for entry in score.time_sig_map[1:]:
        units = _div_round_half_up(entry.tick * ppb, tpq)
        current = spans[-1]
        # A change can land before the current span when the previous change
        # itself was snapped forward; it then waits at that same boundary.
        ahead = max(0, units - current.start_units)
        bars = -(-ahead // current.units_per_bar)  # ceil: snap forward to a boundary
        boundary = current.start_units + bars * current.units_per_bar
        if boundary != units:
            warnings.append(
                f"time signature {entry.numerator}/{entry.denominator} at unit"
                f" {units} snapped forward to bar boundary {boundary}"
            )
        span = BarSpan(
            current.bar_index + bars,
            boundary,
            units_per_bar(entry.numerator, entry.denominator, ppb),
            entry.numerator,
            entry.denominator,
        )
        if boundary == current.start_units:
            spans[-1] = span
        else:
            spans.append(span)
    deduped = [spans[0]]
    for span in spans[1:]:
        if (span.numerator, span.denominator) != (
            deduped[-1].numerator,
            deduped[-1].denominator,
        ):
            deduped.append(span)
    return tuple(deduped)


def quantize(score: Score, config: GridConfig) -> QuantizedScore:
    """Snap a score onto the grid.

    Notes outside ``[pitchMin, pitchMax]`` are dropped with a warning;
    durations clamp into ``[1, maxDurationUnits]``.
    """
    warnings = list(score.warnings)
    ppb = config.positions_per_beat
    tpq = score.ticks_per_quarter
    bar_map = _build_bar_map(score, config, warnings)

    collapsed: list[tuple[int, int]] = []
    for entry in score.tempo_map:
        units = _div_round_half_up(entry.tick * ppb, tpq)
        bpm_bin = tempo_bin_bpm(entry.bpm, config)
        if collapsed and collapsed[-1][0] == units:
            collapsed[-1] = (units, bpm_bin)
        else:
            collapsed.append((units, bpm_bin))
    tempo_entries = [collapsed[0]]
    for units, bpm_bin in collapsed[1:]:
        if bpm_bin != tempo_entries[-1][1]:
            tempo_entries.append((units, bpm_bin))

    tracks = []
    for track in score.tracks:
        notes = []
        dropped = 0
        for note in track.notes:
            if not config.pitch_min <= note.pitch <= config.pitch_max:
                dropped += 1
                continue
            onset = _div_round_half_up(note.onset_tick * ppb, tpq)
            duration = _div_round_half_up(note.duration_ticks * ppb, tpq)
            duration = min(max(duration, 1), config.max_duration_units)
            bar, position = units_to_bar_position(bar_map, onset)
            notes.append(
                QuantizedNote(
                    note_id=note.id,
                    pitch=note.pitch,
                    velocity_bin=velocity_bin(note.velocity, config.num_velocity_bins),
                    onset_units=onset,
                    duration_units=duration,
                    bar=bar,
                    position=position,
                )
            )
        if dropped:
            warnings.append(
                f"track {track.index}: {dropped} notes outside pitch range"
                f" {config.pitch_min}-{config.pitch_max} dropped"
            )
        notes.sort(key=lambda n: (n.onset_units, n.pitch, n.duration_units, n.note_id))
        tracks.append(
            QuantizedTrack(track.index, track.program, track.is_drum, tuple(notes))
        )

    return QuantizedScore(
        config=config,
        tracks=tuple(tracks),
        bar_map=bar_map,
        tempo_bin_map=tuple(tempo_entries),
        warnings=tuple(warnings),
    )

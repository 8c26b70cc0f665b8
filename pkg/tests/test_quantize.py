from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from generators import random_raw_midi
from tokviz.quantize import (
    BarSpan,
    ConfigError,
    GridConfig,
    NonIntegerBarLength,
    QuantizedNote,
    bar_start_units,
    quantize,
    tempo_bin_bpm,
    units_per_bar,
    units_to_bar_position,
    velocity_bin,
    velocity_bin_values,
)
from tokviz.score import KeySigEntry, Score, TempoEntry, TimeSigEntry, build_score
from tokviz.smf import parse_smf


def _oracle_velocity_bins(num_bins: int) -> list[int]:
    # floor(i * 127 / n + 1/2) in exact rational arithmetic
    return [int(Fraction(i * 127, num_bins) + Fraction(1, 2)) for i in range(1, num_bins + 1)]


def _oracle_velocity_bin(velocity: int, num_bins: int) -> int:
    return min(_oracle_velocity_bins(num_bins), key=lambda b: (abs(velocity - b), -b))


def test_velocity_bins_match_oracle_exhaustively():
    for num_bins in (1, 2, 3, 16, 32, 64, 100, 127):
        assert velocity_bin_values(num_bins) == _oracle_velocity_bins(num_bins)
        for velocity in range(1, 128):
            assert velocity_bin(velocity, num_bins) == _oracle_velocity_bin(velocity, num_bins)


def test_velocity_bin_known_values():
    # with 32 bins the neighbors of 100 are 99 and 103
    assert velocity_bin(100, 32) == 99
    assert velocity_bin(127, 32) == 127
    assert velocity_bin(1, 1) == 127


def test_velocity_bin_idempotent():
    for num_bins in (1, 5, 32, 127):
        for value in velocity_bin_values(num_bins):
            assert velocity_bin(value, num_bins) == value


def _oracle_tempo_bin(bpm: float, config: GridConfig) -> int:
    lo = Fraction(config.tempo_min_bpm)
    hi = Fraction(config.tempo_max_bpm)
    n = config.num_tempo_bins
    centers = [lo] if n == 1 else [lo + k * (hi - lo) / (n - 1) for k in range(n)]
    best = min(centers, key=lambda c: (abs(Fraction(bpm) - c), -c))
    return int(best + Fraction(1, 2))


def test_tempo_bin_known_values():
    config = GridConfig()
    # the bin nearest 120 is 40 + 12 * (210 / 31) = 121.29...
    assert _oracle_tempo_bin(120.0, config) == 121
    assert tempo_bin_bpm(120.0, config) == 121
    assert tempo_bin_bpm(40.0, config) == 40
    assert tempo_bin_bpm(250.0, config) == 250
    assert tempo_bin_bpm(10.0, config) == 40    # clamped below
    assert tempo_bin_bpm(999.0, config) == 250  # clamped above


def test_tempo_bin_matches_oracle():
    rng = random.Random(42)
    configs = [GridConfig(), GridConfig(num_tempo_bins=1), GridConfig(num_tempo_bins=7)]
    for config in configs:
        for _ in range(200):
            bpm = rng.uniform(1, 500)
            assert tempo_bin_bpm(bpm, config) == _oracle_tempo_bin(bpm, config)


def test_golden_quantization(golden_bytes: bytes):
    score = build_score(parse_smf(golden_bytes))
    q = quantize(score, GridConfig())
    assert len(q.tracks) == 1
    assert q.tracks[0].notes == (
        QuantizedNote(0, 60, 99, 0, 8, 0, 0),
        QuantizedNote(1, 64, 99, 8, 4, 0, 8),
    )
    assert q.bar_map == (BarSpan(0, 0, 32, 4, 4),)
    assert q.tempo_bin_map == ((0, 121),)
    assert q.warnings == ()


def _plain_score(
    notes_ticks: list[tuple[int, int, int, int]],  # (onset, duration, pitch, velocity)
    time_sigs: list[tuple[int, int, int]] | None = None,
    tpq: int = 480,
) -> Score:
    from tokviz.score import Note, Track

    notes = tuple(
        Note(i, pitch, velocity, onset, duration, 0)
        for i, (onset, duration, pitch, velocity) in enumerate(notes_ticks)
    )
    return Score(
        ticks_per_quarter=tpq,
        tracks=(Track(0, "", 0, False, notes),) if notes else (),
        tempo_map=(TempoEntry(0, 120.0),),
        time_sig_map=tuple(
            TimeSigEntry(t, n, d) for t, n, d in (time_sigs or [(0, 4, 4)])
        ),
        key_sig_map=(KeySigEntry(0, 0, "major"),),
    )


def test_empty_score_bar_map():
    q = quantize(_plain_score([]), GridConfig())
    assert q.tracks == ()
    assert q.bar_map == (BarSpan(0, 0, 32, 4, 4),)


def test_short_duration_clamps_to_one_unit():
    q = quantize(_plain_score([(0, 10, 60, 100)]), GridConfig())
    assert q.tracks[0].notes[0].duration_units == 1


def test_long_duration_clamps_to_max():
    config = GridConfig()
    q = quantize(_plain_score([(0, 480 * 4 * 100, 60, 100)]), config)
    assert q.tracks[0].notes[0].duration_units == config.max_duration_units == 128


def test_onset_rounds_half_up():
    # 30 ticks is exactly half a unit at tpq 480, 8 positions per beat
    q = quantize(_plain_score([(30, 480, 60, 100)]), GridConfig())
    assert q.tracks[0].notes[0].onset_units == 1


def test_out_of_range_pitches_dropped_with_warning():
    q = quantize(_plain_score([(0, 480, 5, 100), (0, 480, 60, 100)]), GridConfig())
    assert [n.pitch for n in q.tracks[0].notes] == [60]
    assert any("outside pitch range" in w for w in q.warnings)


def test_track_emptied_by_pitch_filter_is_kept():
    q = quantize(_plain_score([(0, 480, 5, 100)]), GridConfig())
    assert len(q.tracks) == 1
    assert q.tracks[0].notes == ()


def test_units_per_bar_values():
    assert units_per_bar(4, 4, 8) == 32
    assert units_per_bar(3, 4, 8) == 24
    assert units_per_bar(6, 8, 8) == 24
    assert units_per_bar(2, 2, 8) == 32


def test_non_integer_bar_length():
    with pytest.raises(NonIntegerBarLength):
        units_per_bar(4, 32, 1)
    with pytest.raises(NonIntegerBarLength):
        quantize(_plain_score([], time_sigs=[(0, 4, 32)]), GridConfig(positions_per_beat=1))


def test_units_to_bar_position_uniform():
    bar_map = (BarSpan(0, 0, 32, 4, 4),)
    assert units_to_bar_position(bar_map, 0) == (0, 0)
    assert units_to_bar_position(bar_map, 33) == (1, 1)
    assert units_to_bar_position(bar_map, 319) == (9, 31)


def test_units_to_bar_position_with_change():
    # 3/4 from bar 1: bar 1 starts at unit 32 and holds 24 units
    bar_map = (BarSpan(0, 0, 32, 4, 4), BarSpan(1, 32, 24, 3, 4))
    assert units_to_bar_position(bar_map, 40) == (1, 8)
    assert units_to_bar_position(bar_map, 56) == (2, 0)
    assert bar_start_units(bar_map, 0) == 0
    assert bar_start_units(bar_map, 1) == 32
    assert bar_start_units(bar_map, 3) == 80


def test_time_signature_change_at_boundary():
    # bar 1 of 4/4 starts at tick 1920
    q = quantize(_plain_score([], time_sigs=[(0, 4, 4), (1920, 3, 4)]), GridConfig())
    assert q.bar_map == (BarSpan(0, 0, 32, 4, 4), BarSpan(1, 32, 24, 3, 4))
    assert not any("snapped" in w for w in q.warnings)


def test_mid_bar_time_signature_snaps_forward():
    # tick 2400 is unit 40, inside bar 1; the change waits for bar 2 (unit 64)
    q = quantize(_plain_score([], time_sigs=[(0, 4, 4), (2400, 3, 4)]), GridConfig())
    assert q.bar_map == (BarSpan(0, 0, 32, 4, 4), BarSpan(2, 64, 24, 3, 4))
    assert any("snapped" in w for w in q.warnings)


def test_same_signature_change_is_dropped():
    q = quantize(_plain_score([], time_sigs=[(0, 4, 4), (1920, 8, 8)]), GridConfig())
    assert len(q.bar_map) == 2  # 8/8 has the same bar length but is a new signature
    q2 = quantize(_plain_score([], time_sigs=[(0, 4, 4), (1920, 4, 4)]), GridConfig())
    assert len(q2.bar_map) == 1


def test_tempo_bin_map_dedupes():
    score = Score(
        ticks_per_quarter=480,
        tracks=(),
        tempo_map=(TempoEntry(0, 120.0), TempoEntry(480, 120.5), TempoEntry(960, 200.0)),
        time_sig_map=(TimeSigEntry(0, 4, 4),),
        key_sig_map=(KeySigEntry(0, 0, "major"),),
    )
    q = quantize(score, GridConfig())
    # 120.0 and 120.5 land in the same bin; 200.0 rounds to the 202.58 bin
    assert q.tempo_bin_map == ((0, 121), (16, 203))
    assert _oracle_tempo_bin(200.0, GridConfig()) == 203


@pytest.mark.parametrize(
    "overrides, bad_field",
    [
        ({"positions_per_beat": 0}, "positionsPerBeat"),
        ({"num_velocity_bins": 0}, "numVelocityBins"),
        ({"num_velocity_bins": 128}, "numVelocityBins"),
        ({"max_duration_beats": 0}, "maxDurationBeats"),
        ({"pitch_min": -1}, "pitchMin"),
        ({"pitch_max": 128}, "pitchMax"),
        ({"pitch_min": 60, "pitch_max": 60}, "pitchMin"),
        ({"num_tempo_bins": 0}, "numTempoBins"),
        ({"tempo_min_bpm": 0}, "tempoMinBpm"),
        ({"tempo_min_bpm": 250.0, "tempo_max_bpm": 40.0}, "tempoMaxBpm"),
    ],
)
def test_config_validation(overrides, bad_field):
    with pytest.raises(ConfigError) as err:
        GridConfig(**overrides)
    assert err.value.field == bad_field


def test_config_from_mapping():
    config = GridConfig.from_mapping({"positionsPerBeat": 4, "numVelocityBins": 8})
    assert config.positions_per_beat == 4
    assert config.num_velocity_bins == 8
    assert config.pitch_min == 21  # untouched defaults
    with pytest.raises(ConfigError) as err:
        GridConfig.from_mapping({"positionsPerBeats": 4})
    assert err.value.field == "positionsPerBeats"
    with pytest.raises(ConfigError):
        GridConfig.from_mapping({"positionsPerBeat": "8"})
    with pytest.raises(ConfigError):
        GridConfig.from_mapping({"positionsPerBeat": True})
    with pytest.raises(ConfigError):
        GridConfig.from_mapping({"positionsPerBeat": 8.5})
    assert GridConfig.from_mapping({"positionsPerBeat": 8.0}).positions_per_beat == 8


def _assert_bar_map_tiles(bar_map):
    assert bar_map[0].bar_index == 0
    assert bar_map[0].start_units == 0
    for prev, cur in zip(bar_map, bar_map[1:]):
        assert cur.bar_index > prev.bar_index
        assert cur.start_units == prev.start_units + (
            cur.bar_index - prev.bar_index
        ) * prev.units_per_bar


def test_quantize_randomized_invariants():
    rng = random.Random(2024)
    config = GridConfig()
    for _ in range(40):
        score = build_score(random_raw_midi(rng, max_tracks=4, max_events=128))
        try:
            q = quantize(score, config)
        except NonIntegerBarLength:
            continue
        _assert_bar_map_tiles(q.bar_map)
        assert q.tempo_bin_map[0][0] == 0
        for (u1, b1), (u2, b2) in zip(q.tempo_bin_map, q.tempo_bin_map[1:]):
            assert u1 < u2 and b1 != b2
        for track in q.tracks:
            keys = [(n.onset_units, n.pitch, n.duration_units, n.note_id) for n in track.notes]
            assert keys == sorted(keys)
            for note in track.notes:
                assert config.pitch_min <= note.pitch <= config.pitch_max
                assert 1 <= note.velocity_bin <= 127
                assert note.onset_units >= 0
                assert 1 <= note.duration_units <= config.max_duration_units
                bar, position = units_to_bar_position(q.bar_map, note.onset_units)
                assert (note.bar, note.position) == (bar, position)
                assert 0 <= note.position


@given(st.integers(min_value=1, max_value=127), st.integers(min_value=1, max_value=127))
def test_velocity_bin_in_range(velocity, num_bins):
    value = velocity_bin(velocity, num_bins)
    assert 1 <= value <= 127
    assert velocity_bin(value, num_bins) == value

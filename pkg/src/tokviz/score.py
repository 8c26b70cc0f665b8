"""Normalized score model.

Pairs raw note events into notes with durations, splits multi-channel
tracks apart, and merges the tempo / time signature / key signature events
from every track into global maps with defaults injected at tick 0.
"""

from __future__ import annotations

from bisect import bisect_right
from collections import defaultdict, deque
from dataclasses import dataclass
from typing import Callable, NamedTuple

from .smf import EventKind, RawMidiFile, RawTrack, decode_vlq

DRUM_CHANNEL = 9
DEFAULT_BPM = 120.0
DEFAULT_TIME_SIG = (4, 4)
DEFAULT_KEY_SIG = (0, "major")


class TempoEntry(NamedTuple):
    tick: int
    bpm: float


class TimeSigEntry(NamedTuple):
    tick: int
    numerator: int
    denominator: int


class KeySigEntry(NamedTuple):
    tick: int
    sharps_flats: int
    mode: str


@dataclass(frozen=True, slots=True)
class Note:
    id: int
    pitch: int
    velocity: int
    onset_tick: int
    duration_ticks: int
    track_index: int


@dataclass(frozen=True, slots=True)
class Track:
    index: int
    name: str
    program: int
    is_drum: bool
    notes: tuple[Note, ...]


@dataclass(frozen=True, slots=True)
class Score:
    ticks_per_quarter: int
    tracks: tuple[Track, ...]
    tempo_map: tuple[TempoEntry, ...]
    time_sig_map: tuple[TimeSigEntry, ...]
    key_sig_map: tuple[KeySigEntry, ...]
    warnings: tuple[str, ...] = ()


class TimedTempo(NamedTuple):
    tick: int
    seconds: float
    bpm: float


class TimedTimeSig(NamedTuple):
    tick: int
    seconds: float
    numerator: int
    denominator: int


class TimedKeySig(NamedTuple):
    tick: int
    seconds: float
    sharps_flats: int
    mode: str
    name: str


@dataclass(frozen=True, slots=True)
class ScoreMetadata:
    pitch_min: int | None
    pitch_max: int | None
    note_count: int
    duration_seconds: float
    tempo_map: tuple[TimedTempo, ...]
    time_sig_map: tuple[TimedTimeSig, ...]
    key_sig_map: tuple[TimedKeySig, ...]


_MAJOR_NAMES = {
    -7: "Cb", -6: "Gb", -5: "Db", -4: "Ab", -3: "Eb", -2: "Bb", -1: "F",
    0: "C", 1: "G", 2: "D", 3: "A", 4: "E", 5: "B", 6: "F#", 7: "C#",
}
_MINOR_NAMES = {
    -7: "Ab", -6: "Eb", -5: "Bb", -4: "F", -3: "C", -2: "G", -1: "D",
    0: "A", 1: "E", 2: "B", 3: "F#", 4: "C#", 5: "G#", 6: "D#", 7: "A#",
}


def key_signature_name(sharps_flats: int, mode: str) -> str:
    table = _MAJOR_NAMES if mode == "major" else _MINOR_NAMES
    return f"{table[sharps_flats]} {mode}"


def build_score(raw: RawMidiFile) -> Score:
    """Assemble a :class:`Score` from parsed raw events.

    Each raw track is split per channel so the drum channel gets its own
    Drums-flagged track.  Raw tracks without any notes are dropped with a
    warning.  Note ids number the notes in (track, onset, pitch) order and
    are therefore stable across re-parses of the same bytes.
    """
    warnings = list(raw.warnings)
    tempo: list[TempoEntry] = []
    timesig: list[TimeSigEntry] = []
    keysig: list[KeySigEntry] = []
    pending: list[tuple[str, int, list, int]] = []  # (name, program, notes, channel)

    for track_no, rtrack in enumerate(raw.tracks):
        for ev in rtrack.events:
            if ev.kind is EventKind.TEMPO:
                tempo.append(TempoEntry(ev.tick, 60_000_000 / ev.tempo_us))
            elif ev.kind is EventKind.TIME_SIGNATURE:
                timesig.append(TimeSigEntry(ev.tick, ev.numerator, ev.denominator))
            elif ev.kind is EventKind.KEY_SIGNATURE:
                keysig.append(KeySigEntry(ev.tick, ev.sharps_flats, ev.mode))
        by_channel = _pair_notes(rtrack, track_no, warnings)
        if not by_channel:
            warnings.append(f"track {track_no}: no notes, dropped")
            continue
        name = _track_name(rtrack)
        programs = _program_map(rtrack)
        for channel in sorted(by_channel):
            notes = by_channel[channel]
            notes.sort(key=lambda n: (n[0], n[1], n[4]))
            program = _program_at(programs, channel, notes[0][0])
            pending.append((name, program, notes, channel))

    tracks: list[Track] = []
    note_id = 0
    for index, (name, program, notes, channel) in enumerate(pending):
        numbered = []
        for onset, pitch, duration, velocity, _ in notes:
            numbered.append(Note(note_id, pitch, velocity, onset, duration, index))
            note_id += 1
        tracks.append(
            Track(index, name, program, channel == DRUM_CHANNEL, tuple(numbered))
        )

    return Score(
        ticks_per_quarter=raw.ticks_per_quarter,
        tracks=tuple(tracks),
        tempo_map=_normalize(tempo, TempoEntry(0, DEFAULT_BPM)),
        time_sig_map=_normalize(timesig, TimeSigEntry(0, *DEFAULT_TIME_SIG)),
        key_sig_map=_normalize(keysig, KeySigEntry(0, *DEFAULT_KEY_SIG)),
        warnings=tuple(warnings),
    )


def _pair_notes(
    rtrack: RawTrack, track_no: int, warnings: list[str]
) -> dict[int, list]:
    """First-on first-off pairing per (channel, pitch)."""
    open_notes: dict[tuple[int, int], deque] = defaultdict(deque)
    by_channel: dict[int, list] = defaultdict(list)
    orphan_offs = 0
    on_index = 0
    for ev in rtrack.events:
        if ev.kind is EventKind.NOTE_ON:
            open_notes[(ev.channel, ev.pitch)].append((ev.tick, ev.velocity, on_index))
            on_index += 1
        elif ev.kind is EventKind.NOTE_OFF:
            queue = open_notes.get((ev.channel, ev.pitch))
            if queue:
                onset, velocity, idx = queue.popleft()
                duration = max(1, ev.tick - onset)
                by_channel[ev.channel].append((onset, ev.pitch, duration, velocity, idx))
            else:
                orphan_offs += 1
    unterminated = 0
    for (channel, pitch), queue in open_notes.items():
        for onset, velocity, idx in queue:
            duration = max(1, rtrack.end_tick - onset)
            by_channel[channel].append((onset, pitch, duration, velocity, idx))
            unterminated += 1
    if orphan_offs:
        warnings.append(f"track {track_no}: {orphan_offs} unmatched note-off events dropped")
    if unterminated:
        warnings.append(
            f"track {track_no}: {unterminated} unterminated notes closed at track end"
        )
    return dict(by_channel)


def _track_name(rtrack: RawTrack) -> str:
    # Track name lives in meta 0x03, preserved verbatim as an OTHER event.
    for ev in rtrack.events:
        raw = ev.raw
        if ev.kind is EventKind.OTHER and raw and len(raw) > 2 and raw[0] == 0xFF and raw[1] == 0x03:
            length, used = decode_vlq(raw, 2)
            text = raw[2 + used : 2 + used + length]
            return text.decode("utf-8", errors="replace").strip("\x00").strip()
    return ""


def _program_map(rtrack: RawTrack) -> dict[int, list[tuple[int, int]]]:
    programs: dict[int, list[tuple[int, int]]] = defaultdict(list)
    for ev in rtrack.events:
        if ev.kind is EventKind.PROGRAM_CHANGE:
            programs[ev.channel].append((ev.tick, ev.program))
    return programs


def _program_at(
    programs: dict[int, list[tuple[int, int]]], channel: int, first_onset: int
) -> int:
    changes = programs.get(channel, [])
    program = 0
    for tick, value in changes:
        if tick <= first_onset:
            program = value
        else:
            break
    return program


def seconds_converter(score: Score) -> Callable[[float], float]:
    """A tick-to-seconds function over the score's tempo map.

    Seconds advance by ``60 / (bpm * ticksPerQuarter)`` per tick within
    each tempo segment.
    """
    tpq = score.ticks_per_quarter
    ticks = [e.tick for e in score.tempo_map]
    rates = [60.0 / (e.bpm * tpq) for e in score.tempo_map]
    prefix = [0.0]
    for i in range(1, len(ticks)):
        prefix.append(prefix[i - 1] + (ticks[i] - ticks[i - 1]) * rates[i - 1])

    def convert(tick: float) -> float:
        i = bisect_right(ticks, tick) - 1
        if i < 0:
            return 0.0
        return prefix[i] + (tick - ticks[i]) * rates[i]

    return convert


def tick_to_seconds(score: Score, tick: float) -> float:
    """Convert an absolute tick to seconds, integrating the tempo map."""
    return seconds_converter(score)(tick)


def extract_metadata(score: Score) -> ScoreMetadata:
    convert = seconds_converter(score)
    pitches = [n.pitch for t in score.tracks for n in t.notes]
    ends = [n.onset_tick + n.duration_ticks for t in score.tracks for n in t.notes]
    return ScoreMetadata(
        pitch_min=min(pitches) if pitches else None,
        pitch_max=max(pitches) if pitches else None,
        note_count=len(pitches),
        duration_seconds=convert(max(ends)) if ends else 0.0,
        tempo_map=tuple(
            TimedTempo(e.tick, convert(e.tick), e.bpm) for e in score.tempo_map
        ),
        time_sig_map=tuple(
            TimedTimeSig(e.tick, convert(e.tick), e.numerator, e.denominator)
            for e in score.time_sig_map
        ),
        key_sig_map=tuple(
            TimedKeySig(
                e.tick,
                convert(e.tick),
                e.sharps_flats,
                e.mode,
                key_signature_name(e.sharps_flats, e.mode),
            )
            for e in score.key_sig_map
        ),
    )


def _normalize(entries: list, default) -> tuple:
    """Sort by tick, let the later same-tick entry win, drop value repeats,
    and inject the default when nothing starts the map at tick 0."""
    entries = sorted(entries, key=lambda e: e.tick)
    collapsed: list = []
    for entry in entries:
        if collapsed and collapsed[-1].tick == entry.tick:
            collapsed[-1] = entry
        else:
            collapsed.append(entry)
    if not collapsed or collapsed[0].tick > 0:
        collapsed.insert(0, default)
    deduped = [collapsed[0]]
    for entry in collapsed[1:]:
        if entry[1:] != deduped[-1][1:]:
            deduped.append(entry)
    return tuple(deduped)

"""Standard MIDI File codec.

Decodes SMF bytes into a flat event model and encodes the model back into
bytes.  Only the events the rest of the pipeline consumes get typed payloads
(notes, tempo, time signature, key signature, program change); everything
else is kept verbatim as ``EventKind.OTHER`` so a decoded file re-encodes
without loss.

The decoder is written to survive arbitrary input: any malformed byte string
raises a subclass of :class:`SmfError`, never an unstructured exception.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

# A delta time or tick is stored in at most four VLQ bytes of seven payload
# bits each, so values must stay below 2**28.
MAX_VLQ = 1 << 28

MAX_TEMPO_US = 0xFFFFFF  # tempo meta payload is three bytes


class SmfError(Exception):
    """Base class for every decode or encode failure in this module."""


class BadHeader(SmfError):
    """Missing or unusable MThd header."""


class SmpteUnsupported(SmfError):
    """The file uses SMPTE time division, which has no tick grid."""


class TruncatedChunk(SmfError):
    """A chunk header or body extends past the available bytes."""


class BadEvent(SmfError):
    """An event inside a track chunk violates the framing rules."""


class UnterminatedVlq(SmfError):
    """A variable-length quantity never terminates within four bytes."""


class VlqOverflow(SmfError):
    """A value does not fit in a variable-length quantity."""


class EventKind(Enum):
    NOTE_ON = "NoteOn"
    NOTE_OFF = "NoteOff"
    TEMPO = "Tempo"
    TIME_SIGNATURE = "TimeSignature"
    KEY_SIGNATURE = "KeySignature"
    PROGRAM_CHANGE = "ProgramChange"
    OTHER = "Other"


@dataclass(frozen=True, slots=True)
class RawEvent:
    """One track event at an absolute tick.

    Payload fields are populated per kind and left ``None`` otherwise.
    ``raw`` holds the verbatim event bytes (status byte onward) for OTHER
    events so they can be re-encoded unchanged.
    """

    tick: int
    kind: EventKind
    channel: int | None = None
    pitch: int | None = None
    velocity: int | None = None
    tempo_us: int | None = None
    numerator: int | None = None
    denominator: int | None = None
    sharps_flats: int | None = None
    mode: str | None = None
    program: int | None = None
    raw: bytes | None = None


@dataclass(frozen=True, slots=True)
class RawTrack:
    """Events in file order with nondecreasing ticks.

    ``end_tick`` is the absolute tick of the end-of-track meta, which may
    lie beyond the last event.
    """

    events: tuple[RawEvent, ...]
    end_tick: int = 0


@dataclass(frozen=True, slots=True)
class RawMidiFile:
    format: int
    ticks_per_quarter: int
    tracks: tuple[RawTrack, ...]
    warnings: tuple[str, ...] = ()


def decode_vlq(data: bytes, offset: int = 0) -> tuple[int, int]:
    """Decode a variable-length quantity at ``offset``.

    Returns ``(value, bytes_consumed)``.  Raises :class:`UnterminatedVlq`
    if the input ends mid-quantity or four bytes all carry the
    continuation bit.
    """
    return _read_vlq(data, offset, len(data))


def _read_vlq(data: bytes, offset: int, end: int) -> tuple[int, int]:
    value = 0
    for i in range(4):
        pos = offset + i
        if pos >= end:
            raise UnterminatedVlq(f"input ends mid-quantity at offset {pos}")
        byte = data[pos]
        value = (value << 7) | (byte & 0x7F)
        if byte < 0x80:
            return value, i + 1
    raise UnterminatedVlq(f"no terminating byte within 4 at offset {offset}")


def encode_vlq(value: int) -> bytes:
    """Encode ``value`` as a variable-length quantity (1 to 4 bytes)."""
    if not 0 <= value < MAX_VLQ:
        raise VlqOverflow(f"value {value} outside [0, 2**28)")
    out = bytearray([value & 0x7F])
    value >>= 7
    while value:
        out.append(0x80 | (value & 0x7F))
        value >>= 7
    out.reverse()
    return bytes(out)


def _be16(data: bytes, pos: int) -> int:
    return (data[pos] << 8) | data[pos + 1]


def _be32(data: bytes, pos: int) -> int:
    return (data[pos] << 24) | (data[pos + 1] << 16) | (data[pos + 2] << 8) | data[pos + 3]


def parse_smf(data: bytes) -> RawMidiFile:
    """Parse SMF bytes into a :class:`RawMidiFile`.

    Recoverable oddities (track count mismatch, nonconforming meta
    payloads, missing end-of-track) are recorded as warnings; structural
    corruption raises a :class:`SmfError` subclass.
    """
    if len(data) < 4 or data[:4] != b"MThd":
        raise BadHeader("missing MThd header")
    if len(data) < 8:
        raise BadHeader("header length field missing")
    header_len = _be32(data, 4)
    if header_len < 6:
        raise BadHeader(f"MThd declares {header_len} bytes, need at least 6")
    if len(data) < 8 + header_len:
        raise BadHeader("MThd body truncated")
    fmt = _be16(data, 8)
    declared_tracks = _be16(data, 10)
    division = _be16(data, 12)
    if division & 0x8000:
        raise SmpteUnsupported("SMPTE time division is not supported")
    if division == 0:
        raise BadHeader("time division of 0 ticks per quarter")
    if fmt not in (0, 1, 2):
        raise BadHeader(f"unknown format {fmt}")

    warnings: list[str] = []
    tracks: list[RawTrack] = []
    pos = 8 + header_len
    while pos < len(data):
        if len(data) - pos < 8:
            raise TruncatedChunk(f"chunk header truncated at offset {pos}")
        chunk_type = data[pos : pos + 4]
        chunk_len = _be32(data, pos + 4)
        body_start = pos + 8
        body_end = body_start + chunk_len
        if body_end > len(data):
            raise TruncatedChunk(
                f"chunk {chunk_type!r} declares {chunk_len} bytes, only"
                f" {len(data) - body_start} remain"
            )
        if chunk_type == b"MTrk":
            tracks.append(_parse_track(data, body_start, body_end, len(tracks), warnings))
        # Unknown chunk types are permitted by the format and skipped whole.
        pos = body_end

    if declared_tracks != len(tracks):
        warnings.append(
            f"header declares {declared_tracks} tracks, found {len(tracks)}"
        )
    if fmt == 0 and len(tracks) != 1:
        # Trust the actual chunks; reclassify so the format invariant holds.
        warnings.append(f"format 0 file contains {len(tracks)} tracks, treating as format 1")
        fmt = 1
    return RawMidiFile(fmt, division, tuple(tracks), tuple(warnings))


def _parse_track(
    data: bytes, start: int, end: int, track_no: int, warnings: list[str]
) -> RawTrack:
    events: list[RawEvent] = []
    tick = 0
    running: int | None = None
    pos = start
    saw_eot = False

    def data_byte(p: int) -> int:
        if p >= end:
            raise TruncatedChunk(f"track {track_no}: event truncated at offset {p}")
        b = data[p]
        if b > 0x7F:
            raise BadEvent(
                f"track {track_no}: expected data byte, got 0x{b:02x} at offset {p}"
            )
        return b

    while pos < end:
        delta, used = _read_vlq(data, pos, end)
        pos += used
        tick += delta
        if pos >= end:
            raise TruncatedChunk(f"track {track_no}: delta time with no event at offset {pos}")
        first = data[pos]
        if first < 0x80:
            if running is None:
                raise BadEvent(
                    f"track {track_no}: data byte 0x{first:02x} with no running"
                    f" status at offset {pos}"
                )
            status = running
        else:
            status = first
            pos += 1

        if status < 0xF0:
            running = status
            hi = status & 0xF0
            channel = status & 0x0F
            if hi in (0x80, 0x90, 0xA0, 0xB0, 0xE0):
                d1 = data_byte(pos)
                d2 = data_byte(pos + 1)
                pos += 2
                if hi == 0x90 and d2 > 0:
                    events.append(
                        RawEvent(tick, EventKind.NOTE_ON, channel=channel, pitch=d1, velocity=d2)
                    )
                elif hi in (0x80, 0x90):
                    # NoteOn with velocity 0 is a NoteOff by convention.
                    events.append(
                        RawEvent(tick, EventKind.NOTE_OFF, channel=channel, pitch=d1, velocity=d2)
                    )
                else:
                    events.append(
                        RawEvent(
                            tick, EventKind.OTHER, raw=bytes((status & 0xFF, d1, d2))
                        )
                    )
            else:  # 0xC0 program change, 0xD0 channel pressure
                d1 = data_byte(pos)
                pos += 1
                if hi == 0xC0:
                    events.append(
                        RawEvent(tick, EventKind.PROGRAM_CHANGE, channel=channel, program=d1)
                    )
                else:
                    events.append(RawEvent(tick, EventKind.OTHER, raw=bytes((status, d1))))
        elif status == 0xFF:
            running = None
            if pos >= end:
                raise TruncatedChunk(f"track {track_no}: meta event truncated at offset {pos}")
            meta_type = data[pos]
            pos += 1
            length, used = _read_vlq(data, pos, end)
            pos += used
            if pos + length > end:
                raise TruncatedChunk(
                    f"track {track_no}: meta 0x{meta_type:02x} declares {length}"
                    f" bytes past chunk end"
                )
            payload = data[pos : pos + length]
            pos += length
            if meta_type == 0x2F:
                saw_eot = True
                if pos < end:
                    warnings.append(f"track {track_no}: bytes after end-of-track ignored")
                break
            event = _meta_event(tick, meta_type, payload, track_no, warnings)
            events.append(event)
        elif status in (0xF0, 0xF7):
            running = None
            length, used = _read_vlq(data, pos, end)
            if pos + used + length > end:
                raise TruncatedChunk(f"track {track_no}: sysex runs past chunk end")
            raw = bytes((status,)) + data[pos : pos + used + length]
            pos += used + length
            events.append(RawEvent(tick, EventKind.OTHER, raw=raw))
        else:
            # 0xF1-0xF6 and 0xF8-0xFE have no defined length inside SMF.
            raise BadEvent(f"track {track_no}: unexpected status 0x{status:02x}")

    if not saw_eot:
        warnings.append(f"track {track_no}: missing end-of-track meta")
    return RawTrack(tuple(events), end_tick=tick)


def _meta_event(
    tick: int, meta_type: int, payload: bytes, track_no: int, warnings: list[str]
) -> RawEvent:
    """Build a typed meta event, downgrading nonconforming payloads to OTHER."""
    if meta_type == 0x51:
        if len(payload) == 3:
            tempo = (payload[0] << 16) | (payload[1] << 8) | payload[2]
            if 1 <= tempo <= MAX_TEMPO_US:
                return RawEvent(tick, EventKind.TEMPO, tempo_us=tempo)
        warnings.append(f"track {track_no}: unusable tempo meta at tick {tick}")
    elif meta_type == 0x58:
        if len(payload) >= 2:
            nn, dd = payload[0], payload[1]
            if nn >= 1 and dd <= 5:
                return RawEvent(
                    tick, EventKind.TIME_SIGNATURE, numerator=nn, denominator=1 << dd
                )
        warnings.append(f"track {track_no}: unusable time signature meta at tick {tick}")
    elif meta_type == 0x59:
        if len(payload) >= 2:
            sf = payload[0] - 256 if payload[0] > 127 else payload[0]
            mi = payload[1]
            if -7 <= sf <= 7 and mi in (0, 1):
                return RawEvent(
                    tick,
                    EventKind.KEY_SIGNATURE,
                    sharps_flats=sf,
                    mode="major" if mi == 0 else "minor",
                )
        warnings.append(f"track {track_no}: unusable key signature meta at tick {tick}")
    raw = bytes((0xFF, meta_type)) + encode_vlq(len(payload)) + payload
    return RawEvent(tick, EventKind.OTHER, raw=raw)


def encode_smf(midi: RawMidiFile) -> bytes:
    """Encode a :class:`RawMidiFile` back into SMF bytes.

    Raises :class:`VlqOverflow` when a delta time cannot be represented
    and :class:`ValueError` when the model violates its own invariants.
    """
    if midi.format not in (0, 1, 2):
        raise ValueError(f"unknown format {midi.format}")
    if midi.format == 0 and len(midi.tracks) != 1:
        raise ValueError("format 0 requires exactly one track")
    if not 1 <= midi.ticks_per_quarter <= 0x7FFF:
        raise ValueError(f"ticks per quarter {midi.ticks_per_quarter} outside [1, 32767]")
    out = bytearray(b"MThd\x00\x00\x00\x06")
    out += midi.format.to_bytes(2, "big")
    out += len(midi.tracks).to_bytes(2, "big")
    out += midi.ticks_per_quarter.to_bytes(2, "big")
    for track in midi.tracks:
        body = _encode_track(track)
        out += b"MTrk"
        out += len(body).to_bytes(4, "big")
        out += body
    return bytes(out)


def _encode_track(track: RawTrack) -> bytes:
    body = bytearray()
    last_tick = 0
    for ev in track.events:
        delta = ev.tick - last_tick
        if delta < 0:
            raise ValueError(f"event ticks decrease at tick {ev.tick}")
        body += encode_vlq(delta)
        body += _encode_event(ev)
        last_tick = ev.tick
    body += encode_vlq(max(track.end_tick, last_tick) - last_tick)
    body += b"\xff\x2f\x00"
    return bytes(body)


def _check(value: int | None, lo: int, hi: int, what: str) -> int:
    if value is None or not lo <= value <= hi:
        raise ValueError(f"{what} {value} outside [{lo}, {hi}]")
    return value


def _encode_event(ev: RawEvent) -> bytes:
    kind = ev.kind
    if kind is EventKind.NOTE_ON or kind is EventKind.NOTE_OFF:
        channel = _check(ev.channel, 0, 15, "channel")
        pitch = _check(ev.pitch, 0, 127, "pitch")
        velocity = _check(ev.velocity, 0, 127, "velocity")
        if kind is EventKind.NOTE_ON:
            if velocity == 0:
                raise ValueError("NoteOn velocity 0 must be modeled as NoteOff")
            return bytes((0x90 | channel, pitch, velocity))
        return bytes((0x80 | channel, pitch, velocity))
    if kind is EventKind.PROGRAM_CHANGE:
        channel = _check(ev.channel, 0, 15, "channel")
        program = _check(ev.program, 0, 127, "program")
        return bytes((0xC0 | channel, program))
    if kind is EventKind.TEMPO:
        tempo = _check(ev.tempo_us, 1, MAX_TEMPO_US, "tempo")
        return bytes((0xFF, 0x51, 0x03)) + tempo.to_bytes(3, "big")
    if kind is EventKind.TIME_SIGNATURE:
        numerator = _check(ev.numerator, 1, 255, "numerator")
        if ev.denominator not in (1, 2, 4, 8, 16, 32):
            raise ValueError(f"denominator {ev.denominator} not a power of two up to 32")
        dd = ev.denominator.bit_length() - 1
        return bytes((0xFF, 0x58, 0x04, numerator, dd, 24, 8))
    if kind is EventKind.KEY_SIGNATURE:
        sf = _check(ev.sharps_flats, -7, 7, "sharps/flats")
        if ev.mode not in ("major", "minor"):
            raise ValueError(f"key mode {ev.mode!r}")
        return bytes((0xFF, 0x59, 0x02, sf & 0xFF, 0 if ev.mode == "major" else 1))
    if kind is EventKind.OTHER:
        if not ev.raw or ev.raw[0] < 0x80:
            raise ValueError("OTHER event needs verbatim bytes starting with a status byte")
        return ev.raw
    raise ValueError(f"cannot encode event kind {kind}")

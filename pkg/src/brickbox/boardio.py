"""Board persistence and export: snapshots, score lines, Standard MIDI Files.

A snapshot is the textual photo of a construction; because the board IS
the score, the file doubles as the saved piece.  The format is
line-oriented UTF-8, one record per line, so snapshots diff cleanly:

    title <free text>
    bpm <1-208>
    rhythm.bass <16 x 0|1>      (likewise rhythm.box, rhythm.charlie1,
                                 rhythm.charlie2)
    melody <16 x 0-11>
    minor <16 x 0|1>
    major <16 x 0|1>

Lines whose first non-blank character is '#' are comments.  Missing
records default (bpm 120, empty grid and board, empty title); unknown or
repeated keys are errors.  Serialization is canonical: fixed key order,
single spaces, title line omitted when empty.

SMF export writes a format-0 file at 24 ticks per quarter so file ticks
coincide with clock pulses.  Real-time system bytes are transport, not
content, and are omitted; timing is carried by the division and the
tempo meta event.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field, replace

from . import midiwire as mw
from .analog import MAX_BRICKS, NOMINAL, ResistorModel
from .beatbox import INSTRUMENTS, NUM_STEPS, RhythmGrid, rhythm_block
from .errors import ParseError, RangeError
from .melody import MelodyBoard, chord_quality, ChordQuality, melody_block, note_name
from .transport import (
    MAX_BPM,
    MIN_BPM,
    QUARTERS_PER_CYCLE,
    TICKS_PER_CYCLE,
    TransportConfig,
    validate,
)

_RHYTHM_KEYS = tuple(f"rhythm.{name}" for name in INSTRUMENTS)
_CHORD_TAGS = {ChordQuality.NO_CHORD: "-", ChordQuality.MINOR: "m", ChordQuality.MAJOR: "M"}


@dataclass
class Snapshot:
    """A complete board photo: transport settings plus both boards."""

    config: TransportConfig = field(default_factory=TransportConfig)
    grid: RhythmGrid = field(default_factory=RhythmGrid.empty)
    board: MelodyBoard = field(default_factory=MelodyBoard.empty)
    title: str = ""

    def clone(self) -> "Snapshot":
        return Snapshot(self.config, self.grid.clone(), self.board.clone(), self.title)


@dataclass(frozen=True)
class ScoreLine:
    """Per-step (note name or 'rest', chord tag '-'/'m'/'M') entries."""

    entries: tuple[tuple[str, str], ...]

    def __post_init__(self) -> None:
        if len(self.entries) != NUM_STEPS:
            raise ValueError(f"score line needs {NUM_STEPS} entries")

    def __str__(self) -> str:
        return " | ".join(
            name if tag == "-" else f"{name} {tag}" for name, tag in self.entries
        )


def _parse_row(tokens: list[str], lineno: int, key: str, max_value: int) -> list[int]:
    if len(tokens) != NUM_STEPS:
        raise ParseError(lineno, f"{key} needs {NUM_STEPS} values, got {len(tokens)}")
    values = []
    for token in tokens:
        try:
            value = int(token)
        except ValueError:
            raise ParseError(lineno, f"{key}: bad value {token!r}") from None
        if max_value == 1 and value not in (0, 1):
            raise ParseError(lineno, f"{key}: expected 0 or 1, got {token}")
        if not 0 <= value <= max_value:
            raise RangeError(f"{key}: {value} not in 0-{max_value}", line=lineno)
        values.append(value)
    return values


def parse_snapshot(text: str) -> Snapshot:
    """Parse snapshot text; missing records take their defaults."""
    title = ""
    bpm = 120
    rows: dict[str, list[int]] = {}
    seen: set[str] = set()

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, _, rest = line.partition(" ")
        if key in seen:
            raise ParseError(lineno, f"duplicate key {key!r}")
        seen.add(key)
        if key == "title":
            title = rest
        elif key == "bpm":
            try:
                bpm = int(rest.strip())
            except ValueError:
                raise ParseError(lineno, f"bpm: bad value {rest.strip()!r}") from None
            if not MIN_BPM <= bpm <= MAX_BPM:
                raise RangeError(f"bpm: {bpm} not in {MIN_BPM}-{MAX_BPM}", line=lineno)
        elif key in _RHYTHM_KEYS:
            rows[key] = _parse_row(rest.split(), lineno, key, 1)
        elif key == "melody":
            rows[key] = _parse_row(rest.split(), lineno, key, MAX_BRICKS)
        elif key in ("minor", "major"):
            rows[key] = _parse_row(rest.split(), lineno, key, 1)
        else:
            raise ParseError(lineno, f"unknown key {key!r}")

    grid = RhythmGrid.empty()
    for index, rhythm_key in enumerate(_RHYTHM_KEYS):
        if rhythm_key in rows:
            grid.pads[index] = [bool(v) for v in rows[rhythm_key]]
    board = MelodyBoard(
        heights=rows.get("melody", [0] * NUM_STEPS),
        minor=[bool(v) for v in rows.get("minor", [0] * NUM_STEPS)],
        major=[bool(v) for v in rows.get("major", [0] * NUM_STEPS)],
    )
    return Snapshot(TransportConfig(bpm=bpm), grid, board, title)


def serialize_snapshot(snapshot: Snapshot) -> str:
    """Canonical text form; ``parse_snapshot`` inverts it exactly."""
    lines = []
    if snapshot.title:
        lines.append(f"title {snapshot.title}")
    lines.append(f"bpm {int(snapshot.config.bpm)}")
    for index, rhythm_key in enumerate(_RHYTHM_KEYS):
        lines.append(f"{rhythm_key} " + " ".join(str(int(v)) for v in snapshot.grid.pads[index]))
    lines.append("melody " + " ".join(str(h) for h in snapshot.board.heights))
    lines.append("minor " + " ".join(str(int(v)) for v in snapshot.board.minor))
    lines.append("major " + " ".join(str(int(v)) for v in snapshot.board.major))
    return "\n".join(lines) + "\n"


def load_snapshot(path: str) -> Snapshot:
    with open(path, "r", encoding="utf-8") as handle:
        return parse_snapshot(handle.read())


def snapshot_to_dict(snapshot: Snapshot) -> dict:
    """JSON-friendly snapshot mirror used on the session wire."""
    return {
        "title": snapshot.title,
        "bpm": int(snapshot.config.bpm),
        "frame_order": snapshot.config.frame_order,
        "rhythm": {
            name: [int(v) for v in snapshot.grid.pads[index]]
            for index, name in enumerate(INSTRUMENTS)
        },
        "melody": list(snapshot.board.heights),
        "minor": [int(v) for v in snapshot.board.minor],
        "major": [int(v) for v in snapshot.board.major],
    }


def to_score(board: MelodyBoard) -> ScoreLine:
    """Read the board as a score: names for towers, rests for empty steps."""
    entries = []
    for step in range(NUM_STEPS):
        height = board.heights[step]
        name = note_name(height) if height else "rest"
        tag = _CHORD_TAGS[chord_quality(board.minor[step], board.major[step])]
        entries.append((name, tag))
    return ScoreLine(tuple(entries))


def _var_len(value: int) -> bytes:
    """SMF variable-length quantity (7 bits per byte, big-endian)."""
    if value < 0:
        raise ValueError("negative delta")
    out = bytearray([value & 0x7F])
    value >>= 7
    while value:
        out.append(0x80 | (value & 0x7F))
        value >>= 7
    return bytes(reversed(out))


def export_smf(
    snapshot: Snapshot,
    cycles: int = 1,
    model: ResistorModel = NOMINAL,
    *,
    include_rhythm: bool = True,
    include_melody: bool = True,
) -> bytes:
    """Render the snapshot to a format-0 Standard MIDI File.

    Division is 24 ticks per quarter, matching the clock, so quarter q of
    cycle c lands on tick 24*(16*c + q - 1) and the track spans exactly
    ``cycles * 384`` ticks.  The include flags mirror detaching a stage
    from the pipeline.
    """
    if cycles < 1:
        raise RangeError(f"cycles {cycles} must be >= 1")
    validate(snapshot.config)
    config = snapshot.config

    track = bytearray()

    def event(delta: int, data: bytes) -> None:
        track.extend(_var_len(delta))
        track.extend(data)

    numerator, denominator = config.time_signature
    event(0, bytes([0xFF, 0x58, 0x04, numerator, denominator.bit_length() - 1, 24, 8]))
    tempo = round(60_000_000 / config.bpm)
    event(0, bytes([0xFF, 0x51, 0x03]) + tempo.to_bytes(3, "big"))

    tick = 0
    for cycle in range(cycles):
        for quarter in range(1, QUARTERS_PER_CYCLE + 1):
            at = (cycle * QUARTERS_PER_CYCLE + quarter - 1) * 24
            messages: list[mw.MidiMessage] = []
            if include_rhythm:
                messages += rhythm_block(snapshot.grid, quarter)
            if include_melody:
                messages += melody_block(snapshot.board, quarter, model)
            for message in messages:
                event(at - tick, mw.encode_message(message))
                tick = at
    event(cycles * TICKS_PER_CYCLE - tick, b"\xff\x2f\x00")

    header = b"MThd" + struct.pack(">IHHH", 6, 0, 1, 24)
    return header + b"MTrk" + struct.pack(">I", len(track)) + bytes(track)


def with_overrides(
    snapshot: Snapshot,
    bpm: int | None = None,
    frame_order: str | None = None,
) -> Snapshot:
    """Copy of ``snapshot`` with transport fields replaced (used by the CLI)."""
    config = snapshot.config
    if bpm is not None:
        config = replace(config, bpm=bpm)
    if frame_order is not None:
        config = replace(config, frame_order=frame_order)
    return Snapshot(config, snapshot.grid, snapshot.board, snapshot.title)

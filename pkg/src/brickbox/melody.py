"""Melody board: pitch towers, chord rows, ADC routing, channel-1 merger.

The board carries 16 steps of three rows: a pitch tower (0-11 bricks, one
brick per semitone from the lowest note) and two short-circuit rows that
request a minor or major chord for the step; when both are placed the
major wins.  Tower voltages route through two 8-channel converters and a
final 2-to-1 select, the low half of the board on chip 0 and the high
half on chip 1.  Chord rows only need two converter levels: a placed
piece shorts the line to 0 V.

Each quarter becomes a channel-1 block: All Notes Off, then (when the
step holds a tower) the melody note plus the chord tones, the triad
rooted one octave below the melody so the tune stays on top.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import midiwire as mw
from .analog import (
    MAX_BRICKS,
    NOMINAL,
    Note,
    NoteDecision,
    ResistorModel,
    adc_code,
    decide_note,
    divider_voltage,
    sample_tower,
    stack_resistance,
)
from .errors import RangeError
from .streams import splice_quarter_blocks
from .transport import QUARTERS_PER_CYCLE, TransportConfig

NUM_STEPS = 16
BASE_NOTE = 60  # lowest tower pitch (C4) in MIDI numbering
_NOTE_NAMES = ("C", "C#", "D", "D#", "E", "F", "F#", "G", "G#", "A", "A#", "B")

CHORD_ROWS = ("minor", "major")


class ChordQuality(Enum):
    NO_CHORD = "none"
    MINOR = "minor"
    MAJOR = "major"


# Triad intervals relative to the melody note; the root sits an octave down.
_CHORD_INTERVALS = {
    ChordQuality.MINOR: (-12, -9, -5),
    ChordQuality.MAJOR: (-12, -8, -5),
}


@dataclass
class MelodyBoard:
    """16 steps of (tower height, minor row, major row)."""

    heights: list[int] = field(default_factory=lambda: [0] * NUM_STEPS)
    minor: list[bool] = field(default_factory=lambda: [False] * NUM_STEPS)
    major: list[bool] = field(default_factory=lambda: [False] * NUM_STEPS)

    def __post_init__(self) -> None:
        if len(self.heights) != NUM_STEPS or len(self.minor) != NUM_STEPS or len(self.major) != NUM_STEPS:
            raise ValueError(f"board rows must have {NUM_STEPS} steps")
        for h in self.heights:
            if not 0 <= h <= MAX_BRICKS:
                raise RangeError(f"tower height {h} not in 0-{MAX_BRICKS}")

    @classmethod
    def empty(cls) -> "MelodyBoard":
        return cls()

    def set_tower(self, step: int, height: int) -> None:
        if not 0 <= step < NUM_STEPS:
            raise RangeError(f"step {step} not in 0-{NUM_STEPS - 1}")
        if not 0 <= height <= MAX_BRICKS:
            raise RangeError(f"tower height {height} not in 0-{MAX_BRICKS}")
        self.heights[step] = height

    def set_chord(self, step: int, row: str, on: bool) -> None:
        if not 0 <= step < NUM_STEPS:
            raise RangeError(f"step {step} not in 0-{NUM_STEPS - 1}")
        if row not in CHORD_ROWS:
            raise RangeError(f"chord row must be one of {CHORD_ROWS}")
        (self.minor if row == "minor" else self.major)[step] = bool(on)

    def clone(self) -> "MelodyBoard":
        return MelodyBoard(self.heights[:], self.minor[:], self.major[:])


def chord_quality(minor_flag: bool, major_flag: bool) -> ChordQuality:
    """Combine the two chord rows; major wins when both are placed."""
    if major_flag:
        return ChordQuality.MAJOR
    if minor_flag:
        return ChordQuality.MINOR
    return ChordQuality.NO_CHORD


def midi_note(i: int) -> int:
    """MIDI number of note index i: one semitone per brick above C4 (60)."""
    if not 1 <= i <= MAX_BRICKS:
        raise RangeError(f"note index {i} not in 1-{MAX_BRICKS}")
    return BASE_NOTE + (i - 1)


def note_name(i: int) -> str:
    """Chromatic name of note index i, e.g. 1 -> 'C4', 2 -> 'C#4'."""
    number = midi_note(i)
    return f"{_NOTE_NAMES[number % 12]}{number // 12 - 1}"


def chord_notes(i: int, quality: ChordQuality) -> list[int]:
    """Accompanying triad for note index i; empty when no chord is requested."""
    if quality is ChordQuality.NO_CHORD:
        return []
    root = midi_note(i)
    return [root + interval for interval in _CHORD_INTERVALS[quality]]


def adc_channel(step: int) -> tuple[int, int]:
    """Converter routing for a step: (chip, channel); chip doubles as the
    final mux select bit."""
    if not 0 <= step < NUM_STEPS:
        raise RangeError(f"step {step} not in 0-{NUM_STEPS - 1}")
    return step // 8, step % 8


def step_for_channel(chip: int, channel: int) -> int:
    """Inverse of :func:`adc_channel`."""
    if chip not in (0, 1) or not 0 <= channel <= 7:
        raise RangeError(f"no step at chip {chip} channel {channel}")
    return chip * 8 + channel


def read_step(
    board: MelodyBoard,
    step: int,
    model: ResistorModel = NOMINAL,
    rng: np.random.Generator | None = None,
) -> NoteDecision:
    """Decode the tower on one step through the full converter chain.

    With ``rng`` supplied the resistors are toleranced draws; otherwise the
    chain runs at nominal values.
    """
    chip, channel = adc_channel(step)  # routing is lossless in the model
    height = board.heights[step_for_channel(chip, channel)]
    if rng is not None:
        reading = sample_tower(height, model, rng)
        return decide_note(reading.doc)
    doc = adc_code(divider_voltage(stack_resistance(height, model), model), model)
    return decide_note(doc)


def _sense_level(pressed: bool, model: ResistorModel) -> int:
    """Two-level read of a chord row: a placed piece shorts the line to 0 V."""
    doc = adc_code(0.0 if pressed else model.v_in, model)
    return 0 if doc < model.adc_levels // 2 else 1


def read_chord_flags(
    board: MelodyBoard, step: int, model: ResistorModel = NOMINAL
) -> tuple[bool, bool]:
    """(minor, major) as seen through the converter's two-level sensing."""
    if not 0 <= step < NUM_STEPS:
        raise RangeError(f"step {step} not in 0-{NUM_STEPS - 1}")
    return (
        _sense_level(board.minor[step], model) == 0,
        _sense_level(board.major[step], model) == 0,
    )


def melody_block(
    board: MelodyBoard, quarter: int, model: ResistorModel = NOMINAL
) -> list[mw.MidiMessage]:
    """Channel-1 block for one quarter: All Notes Off, then melody + chord.

    A rest step sends only the All Notes Off; chord rows on a rest are
    ignored since there is no root to build on.
    """
    if not 1 <= quarter <= QUARTERS_PER_CYCLE:
        raise RangeError(f"quarter {quarter} not in 1-{QUARTERS_PER_CYCLE}")
    step = quarter - 1
    block: list[mw.MidiMessage] = [mw.ControlChange(mw.MELODY_CHANNEL, mw.ALL_NOTES_OFF, 0x00)]
    decision = read_step(board, step, model)
    if isinstance(decision, Note):
        block.append(mw.NoteOn(mw.MELODY_CHANNEL, midi_note(decision.index), mw.DEFAULT_VELOCITY))
        quality = chord_quality(*read_chord_flags(board, step, model))
        block.extend(
            mw.NoteOn(mw.MELODY_CHANNEL, note, mw.DEFAULT_VELOCITY)
            for note in chord_notes(decision.index, quality)
        )
    return block


def merge_melody(
    in_stream: bytes,
    board: MelodyBoard,
    config: TransportConfig,
    model: ResistorModel = NOMINAL,
) -> bytes:
    """Insert each quarter's melody block into a clock or clock+rhythm stream.

    When the quarter already carries a rhythm block the melody follows it
    directly; otherwise the block takes the rhythm block's frame position,
    so the melody stage works with or without the beatbox ahead of it.
    """

    def block(ordinal: int) -> bytes:
        return mw.encode_messages(
            melody_block(board, (ordinal - 1) % QUARTERS_PER_CYCLE + 1, model)
        )

    return splice_quarter_blocks(
        in_stream, block, config.frame_order, after_channel=mw.PERCUSSION_CHANNEL
    )

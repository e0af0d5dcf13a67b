"""Rhythm pad grid, its multiplexer scan model, and the channel-10 merger.

The pad board exposes 4 instruments x 16 steps of push buttons.  Each
instrument's 16 lines feed two 8-to-1 multiplexers sharing address bits
A, B, C, with a final 2-to-1 stage selected by D picking the first or
last eight steps; a pressed pad pulls its line to 0 V (active low).

Every quarter, the current step's column becomes a channel-10 block:
All Notes Off (silencing the previous quarter) followed by a Note On per
pressed instrument, in fixed board order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from . import midiwire as mw
from .errors import RangeError
from .streams import splice_quarter_blocks
from .transport import QUARTERS_PER_CYCLE, TransportConfig

NUM_STEPS = 16
INSTRUMENTS = ("bass", "box", "charlie1", "charlie2")
INSTRUMENT_NOTES = (0x24, 0x26, 0x31, 0x2E)  # channel-10 note per instrument row


def instrument_index(instrument: int | str) -> int:
    """Accept a row index 0-3 or an instrument name."""
    if isinstance(instrument, str):
        try:
            return INSTRUMENTS.index(instrument)
        except ValueError:
            raise RangeError(f"unknown instrument {instrument!r}") from None
    if not 0 <= instrument < len(INSTRUMENTS):
        raise RangeError(f"instrument index {instrument} not in 0-3")
    return instrument


@dataclass
class RhythmGrid:
    """16 steps of on/off pads for each of the 4 percussion instruments."""

    pads: list[list[bool]] = field(
        default_factory=lambda: [[False] * NUM_STEPS for _ in INSTRUMENTS]
    )

    def __post_init__(self) -> None:
        if len(self.pads) != len(INSTRUMENTS) or any(len(row) != NUM_STEPS for row in self.pads):
            raise ValueError(f"grid must be {len(INSTRUMENTS)}x{NUM_STEPS}")

    @classmethod
    def empty(cls) -> "RhythmGrid":
        return cls()

    def pressed(self, instrument: int | str, step: int) -> bool:
        return self.pads[instrument_index(instrument)][_check_step(step)]

    def set_pad(self, instrument: int | str, step: int, on: bool) -> None:
        self.pads[instrument_index(instrument)][_check_step(step)] = bool(on)

    def clone(self) -> "RhythmGrid":
        return RhythmGrid([row[:] for row in self.pads])


def _check_step(step: int) -> int:
    if not 0 <= step < NUM_STEPS:
        raise RangeError(f"step {step} not in 0-{NUM_STEPS - 1}")
    return step


@dataclass(frozen=True)
class MuxAddress:
    """Address bits of the two-stage scan: A is the LSB, D picks the half."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self) -> None:
        if any(bit not in (0, 1) for bit in (self.a, self.b, self.c, self.d)):
            raise ValueError("address bits must be 0 or 1")

    @property
    def step(self) -> int:
        return 8 * self.d + 4 * self.c + 2 * self.b + self.a

    @classmethod
    def from_step(cls, step: int) -> "MuxAddress":
        _check_step(step)
        return cls(a=step & 1, b=(step >> 1) & 1, c=(step >> 2) & 1, d=(step >> 3) & 1)


def scan_level(grid: RhythmGrid, instrument: int | str, addr: MuxAddress) -> int:
    """Logic level on an instrument's scan output: 0 iff the pad is pressed."""
    return 0 if grid.pressed(instrument, addr.step) else 1


def grid_from_scan(scan: Callable[[int, MuxAddress], int]) -> RhythmGrid:
    """Rebuild the grid by sweeping all 4x16 addresses of a scan function."""
    grid = RhythmGrid.empty()
    for instrument in range(len(INSTRUMENTS)):
        for step in range(NUM_STEPS):
            grid.pads[instrument][step] = scan(instrument, MuxAddress.from_step(step)) == 0
    return grid


def rhythm_block(grid: RhythmGrid, quarter: int) -> list[mw.MidiMessage]:
    """Channel-10 block for one quarter: All Notes Off, then pressed pads.

    The block is emitted even when the column is empty so notes sustained
    from the previous quarter are always silenced.
    """
    if not 1 <= quarter <= QUARTERS_PER_CYCLE:
        raise RangeError(f"quarter {quarter} not in 1-{QUARTERS_PER_CYCLE}")
    step = quarter - 1
    block: list[mw.MidiMessage] = [
        mw.ControlChange(mw.PERCUSSION_CHANNEL, mw.ALL_NOTES_OFF, 0x00)
    ]
    for instrument, note in enumerate(INSTRUMENT_NOTES):
        if grid.pads[instrument][step]:
            block.append(mw.NoteOn(mw.PERCUSSION_CHANNEL, note, mw.DEFAULT_VELOCITY))
    return block


def merge_rhythm(in_stream: bytes, grid: RhythmGrid, config: TransportConfig) -> bytes:
    """Insert each quarter's rhythm block into a clock (or richer) stream.

    Input bytes pass through untouched; quarter indices wrap so streams
    longer than one cycle keep reading the same 16 columns.
    """

    def block(ordinal: int) -> bytes:
        return mw.encode_messages(rhythm_block(grid, (ordinal - 1) % QUARTERS_PER_CYCLE + 1))

    return splice_quarter_blocks(in_stream, block, config.frame_order)

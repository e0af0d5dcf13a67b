"""Synchronisation clock: the 16-quarter, 24-PPQN MIDI clock cycle.

Each quarter begins with a marker (Start at quarter 1, Continue at
quarters 2-16) and carries 24 Timing Clock pulses, so one cycle holds
exactly 1 Start, 15 Continues and 384 clocks.  Content blocks from the
rhythm and melody stages slot into each quarter frame; ``frame_order``
selects where: ``canonical`` puts a quarter's content directly after its
marker, ``paper`` defers it until after the quarter's 24 clocks.  The
per-cycle byte multiset is identical either way.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from . import midiwire as mw
from .errors import ConfigError

PPQN = 24
QUARTERS_PER_CYCLE = 16
TICKS_PER_CYCLE = PPQN * QUARTERS_PER_CYCLE  # 384
MIN_BPM = 1
MAX_BPM = 208  # ceiling imposed by the controller's per-tick processing budget

FRAME_ORDERS = ("canonical", "paper")


@dataclass(frozen=True)
class TransportConfig:
    """Clock parameters.

    ``time_signature`` is recorded in exported files but has no effect on
    the byte stream.
    """

    bpm: int = 120
    quarters_per_cycle: int = QUARTERS_PER_CYCLE
    ppqn: int = PPQN
    frame_order: str = "canonical"
    time_signature: tuple[int, int] = (4, 4)


def validate(config: TransportConfig) -> None:
    """Reject configurations the machine cannot play."""
    if not isinstance(config.bpm, (int, float)) or not MIN_BPM <= config.bpm <= MAX_BPM:
        raise ConfigError("bpm", f"{config.bpm!r} not in {MIN_BPM}-{MAX_BPM}")
    if config.ppqn != PPQN:
        raise ConfigError("ppqn", f"must be {PPQN}, got {config.ppqn}")
    if config.quarters_per_cycle != QUARTERS_PER_CYCLE:
        raise ConfigError(
            "quarters_per_cycle", f"must be {QUARTERS_PER_CYCLE}, got {config.quarters_per_cycle}"
        )
    if config.frame_order not in FRAME_ORDERS:
        raise ConfigError("frame_order", f"must be one of {FRAME_ORDERS}")
    num, denom = config.time_signature
    if num < 1 or denom < 1 or denom & (denom - 1):
        raise ConfigError("time_signature", "denominator must be a power of two")


def tick_period(bpm: float) -> float:
    """Seconds between Timing Clock pulses: a 60/bpm quarter split 24 ways."""
    return 60.0 / (bpm * PPQN)


def marker_for(quarter_ordinal: int) -> mw.Start | mw.Continue:
    """Marker for the q-th quarter since the stream began (1-based).

    Start replaces Continue every 16 quarters, so a cycle carries one
    Start and 15 Continues.
    """
    if quarter_ordinal < 1:
        raise ValueError(f"quarter ordinal {quarter_ordinal} must be >= 1")
    return mw.Start() if quarter_ordinal % QUARTERS_PER_CYCLE == 1 else mw.Continue()


@dataclass(frozen=True)
class TimedMessage:
    """A clock event stamped with its tick index from cycle start."""

    tick: int
    message: mw.MidiMessage


def clock_cycle(config: TransportConfig) -> list[TimedMessage]:
    """One cycle of bare clock: 16 quarter frames with no content blocks.

    Quarter q begins at tick 24(q-1); its marker shares that tick with the
    first of its 24 clock pulses.
    """
    validate(config)
    events: list[TimedMessage] = []
    for q in range(1, QUARTERS_PER_CYCLE + 1):
        base = PPQN * (q - 1)
        events.append(TimedMessage(base, marker_for(q)))
        events.extend(TimedMessage(base + j, mw.TimingClock()) for j in range(PPQN))
    return events


def clock_bytes(config: TransportConfig, cycles: int = 1) -> bytes:
    """Wire bytes of ``cycles`` back-to-back clock cycles."""
    if cycles < 1:
        raise ValueError(f"cycles {cycles} must be >= 1")
    one = mw.encode_messages(e.message for e in clock_cycle(config))
    return one * cycles


@dataclass
class QuarterFrame:
    """One quarter's worth of stream: marker, content slots, 24 clocks."""

    index: int  # 1-16 within the cycle
    marker: mw.Start | mw.Continue
    rhythm: list[mw.MidiMessage] = field(default_factory=list)
    melody: list[mw.MidiMessage] = field(default_factory=list)

    def __post_init__(self) -> None:
        if not 1 <= self.index <= QUARTERS_PER_CYCLE:
            raise ValueError(f"quarter index {self.index} not in 1-{QUARTERS_PER_CYCLE}")
        if isinstance(self.marker, mw.Start) != (self.index == 1):
            raise ValueError("Start marks quarter 1 only")

    def messages(self, frame_order: str = "canonical") -> list[mw.MidiMessage]:
        clocks: list[mw.MidiMessage] = [mw.TimingClock()] * PPQN
        content = self.rhythm + self.melody
        if frame_order == "paper":
            return [self.marker] + clocks + content
        return [self.marker] + content + clocks

    def to_bytes(self, frame_order: str = "canonical") -> bytes:
        return mw.encode_messages(self.messages(frame_order))


class TickScheduler:
    """Runs a callback on a fixed tick grid with absolute deadlines.

    Most of each period is slept away and the last stretch is spin-waited,
    so individual ticks land close to the grid and the long-run mean
    interval matches the period with no cumulative drift.  A period of 0
    runs ticks back to back (used by tests and offline drivers).
    """

    _SPIN = 0.0015  # leave this much to the spin loop; sleep() wakes late

    def __init__(self, period: float):
        if period < 0:
            raise ValueError("period must be >= 0")
        self.period = period

    def set_period(self, period: float) -> None:
        """Change the tick period; takes effect from the next tick."""
        if period < 0:
            raise ValueError("period must be >= 0")
        self.period = period

    def run(self, on_tick, ticks: int | None = None, stop=None) -> int:
        """Call ``on_tick(k)`` for k = 0, 1, ... on the tick grid.

        Stops after ``ticks`` calls or when ``stop`` (a threading.Event)
        is set, whichever comes first.  Returns the number of ticks run.
        """
        k = 0
        deadline = time.perf_counter()
        while ticks is None or k < ticks:
            if stop is not None and stop.is_set():
                break
            self._wait_until(deadline)
            on_tick(k)
            k += 1
            deadline += self.period
        return k

    @classmethod
    def _wait_until(cls, deadline: float) -> None:
        while True:
            remaining = deadline - time.perf_counter()
            if remaining <= 0:
                return
            if remaining > cls._SPIN:
                time.sleep(remaining - 0.001)

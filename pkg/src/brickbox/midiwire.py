"""MIDI wire codec for the small byte vocabulary the sequencer speaks.

Channel traffic is limited to Control Change (the per-quarter All Notes
Off) and Note On; system traffic to the three real-time bytes that carry
the clock: Timing Clock (0xF8), Start (0xFA) and Continue (0xFB).  Any
other legal MIDI message decodes to :class:`Passthrough` so stream stages
can forward traffic they do not understand without altering it.

Decoding is incremental: :func:`decode_stream` accepts arbitrary chunk
boundaries and returns the :class:`DecoderState` to carry into the next
call.  Real-time bytes may legally arrive in the middle of a channel
message; they are emitted immediately and the interrupted message resumes
unharmed.  Running status is accepted on input, but :func:`encode_message`
always emits full status bytes so generated streams stay byte-exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field

# Status bytes of the wire vocabulary.
TIMING_CLOCK_BYTE = 0xF8
START_BYTE = 0xFA
CONTINUE_BYTE = 0xFB
NOTE_ON_STATUS = 0x90
CONTROL_CHANGE_STATUS = 0xB0

ALL_NOTES_OFF = 0x7B  # controller number; value 0 silences a channel

PERCUSSION_CHANNEL = 10  # drum blocks: status bytes 0xB9 / 0x99
MELODY_CHANNEL = 1       # melody blocks: status bytes 0xB0 / 0x90

# Every generated Note On carries this velocity: the original device's
# documented byte streams elide the velocity byte, so a fixed mid-level
# value is used to keep the wire format legal.
DEFAULT_VELOCITY = 0x64


def _check(cond: bool, what: str) -> None:
    if not cond:
        raise ValueError(what)


@dataclass(frozen=True)
class Start:
    """Cycle start marker (0xFA); replaces Continue at quarter 1."""


@dataclass(frozen=True)
class Continue:
    """Quarter marker (0xFB) for quarters 2-16."""


@dataclass(frozen=True)
class TimingClock:
    """One of the 24 clock pulses per quarter (0xF8)."""


@dataclass(frozen=True)
class ControlChange:
    """Control Change on ``channel`` (1-based)."""

    channel: int
    controller: int
    value: int

    def __post_init__(self) -> None:
        _check(1 <= self.channel <= 16, f"channel {self.channel} not in 1-16")
        _check(0 <= self.controller <= 0x7F, f"controller {self.controller} not a data byte")
        _check(0 <= self.value <= 0x7F, f"value {self.value} not a data byte")


@dataclass(frozen=True)
class NoteOn:
    """Note On on ``channel`` (1-based)."""

    channel: int
    note: int
    velocity: int

    def __post_init__(self) -> None:
        _check(1 <= self.channel <= 16, f"channel {self.channel} not in 1-16")
        _check(0 <= self.note <= 0x7F, f"note {self.note} not a data byte")
        _check(0 <= self.velocity <= 0x7F, f"velocity {self.velocity} not a data byte")


@dataclass(frozen=True)
class Passthrough:
    """A complete, valid MIDI message the sequencer does not interpret.

    Kept verbatim so merger stages can forward unknown traffic unchanged.
    """

    data: bytes

    def __post_init__(self) -> None:
        _check(len(self.data) >= 1, "empty passthrough")
        status = self.data[0]
        _check(status >= 0x80, f"0x{status:02x} is not a status byte")
        _check(all(b <= 0x7F for b in self.data[1:]), "status byte inside passthrough data")
        if status >= 0xF8:
            _check(len(self.data) == 1, "real-time messages are single bytes")
        elif status != 0xF0:  # SysEx tails are forwarded as-is, unchecked
            _check(len(self.data) == 1 + _data_len(status),
                   f"status 0x{status:02x} needs {_data_len(status)} data bytes")


MidiMessage = Start | Continue | TimingClock | ControlChange | NoteOn | Passthrough

_START = Start()
_CONTINUE = Continue()
_TIMING_CLOCK = TimingClock()

_REALTIME = {
    TIMING_CLOCK_BYTE: _TIMING_CLOCK,
    START_BYTE: _START,
    CONTINUE_BYTE: _CONTINUE,
}


@dataclass(frozen=True)
class DecodeError:
    """A byte that cannot belong to any message; the decoder skipped it.

    ``position`` is the offset within the chunk passed to the call that
    produced it.
    """

    position: int
    byte: int


def _data_len(status: int) -> int:
    """Number of data bytes the given status byte requires."""
    hi = status & 0xF0
    if hi in (0x80, 0x90, 0xA0, 0xB0, 0xE0):
        return 2
    if hi in (0xC0, 0xD0):
        return 1
    return {0xF1: 1, 0xF2: 2, 0xF3: 1}.get(status, 0)


def encode_message(m: MidiMessage) -> bytes:
    """Encode one message; real-time messages are 1 byte, channel messages 3.

    Running-status compression is never emitted.
    """
    match m:
        case Start():
            return bytes([START_BYTE])
        case Continue():
            return bytes([CONTINUE_BYTE])
        case TimingClock():
            return bytes([TIMING_CLOCK_BYTE])
        case ControlChange(channel=ch, controller=ctl, value=val):
            return bytes([CONTROL_CHANGE_STATUS | (ch - 1), ctl, val])
        case NoteOn(channel=ch, note=note, velocity=vel):
            return bytes([NOTE_ON_STATUS | (ch - 1), note, vel])
        case Passthrough(data=data):
            return data
    raise TypeError(f"not a MIDI message: {m!r}")


def encode_messages(messages) -> bytes:
    """Concatenate the encodings of a message sequence."""
    return b"".join(encode_message(m) for m in messages)


@dataclass
class DecoderState:
    """Carry-over between :func:`decode_stream` calls.

    ``running_status`` is the status byte in effect (kept after a channel
    message completes so running-status input decodes; cleared by system
    common messages).  ``pending`` holds the data bytes of a message still
    being assembled; it is always shorter than the message needs.
    """

    running_status: int | None = None
    pending: bytearray = field(default_factory=bytearray)

    @property
    def has_partial(self) -> bool:
        """True when a message is mid-assembly (bytes are buffered)."""
        return bool(self.pending)


def _build(status: int, data: bytes) -> MidiMessage:
    hi = status & 0xF0
    channel = (status & 0x0F) + 1
    if hi == CONTROL_CHANGE_STATUS:
        return ControlChange(channel, data[0], data[1])
    if hi == NOTE_ON_STATUS:
        return NoteOn(channel, data[0], data[1])
    return Passthrough(bytes([status]) + data)


def decode_stream(
    data: bytes, state: DecoderState | None = None
) -> tuple[list[MidiMessage | DecodeError], DecoderState]:
    """Decode a chunk of wire bytes, resuming from ``state``.

    Returns the messages completed by this chunk, in byte order, plus the
    state to pass to the next call (the input state is reused in place).
    A stray data byte with no status in effect yields a
    :class:`DecodeError` entry and decoding continues with the next byte.

    A new status byte silently abandons any half-assembled message, per
    MIDI receiver convention.
    """
    if state is None:
        state = DecoderState()
    out: list[MidiMessage | DecodeError] = []
    for pos, b in enumerate(data):
        if b >= 0xF8:
            # Real-time: emitted immediately, never disturbs the partial.
            out.append(_REALTIME.get(b, None) or Passthrough(bytes([b])))
        elif b >= 0x80:
            state.pending.clear()
            if b <= 0xEF:
                state.running_status = b
            elif _data_len(b) == 0:
                # F0/F4-F7 complete at once; SysEx payloads are out of scope
                # and surface as stray-byte errors.
                state.running_status = None
                out.append(Passthrough(bytes([b])))
            else:
                state.running_status = b
        else:
            status = state.running_status
            if status is None:
                out.append(DecodeError(pos, b))
                continue
            state.pending.append(b)
            if len(state.pending) == _data_len(status):
                payload = bytes(state.pending)
                state.pending.clear()
                out.append(_build(status, payload))
                if status >= 0xF0:  # system common leaves no running status
                    state.running_status = None
    return out, state

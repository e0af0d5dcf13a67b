"""Byte-stream splicing: insert per-quarter content blocks into a clock stream.

The splicer works directly on wire bytes and only ever inserts, so the
input byte sequence is always a subsequence of the output and traffic it
does not understand (running status, passthrough messages) survives
untouched.  Quarters are identified by counting markers: a Start resets
the ordinal to 1, each Continue increments it.

Insertion points are message boundaries only.  In ``canonical`` frame
order a quarter's block goes immediately after its marker; in ``paper``
order it goes at the end of the quarter, just before the next marker (or
end of stream).  A merger that must follow an earlier stage's content
(the melody following the rhythm block) passes ``after_channel``: when the
quarter already contains messages on that channel, the block lands right
after the last of them instead.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .errors import StreamError
from .midiwire import CONTINUE_BYTE, START_BYTE, _data_len

FRAME_ORDERS = ("canonical", "paper")


@dataclass
class _Quarter:
    ordinal: int
    anchor: int | None = None  # first message boundary after the marker byte
    end: int | None = None     # message boundary just before the next marker / EOS
    last_ch_end: int | None = None  # boundary after the last tracked-channel message


def _scan_quarters(stream: bytes, content_channel: int | None) -> list[_Quarter]:
    """Single pass over ``stream`` locating markers and insertion anchors.

    Raises :class:`StreamError` for a data byte no status can claim, or a
    message left unfinished at end of input.  A status byte arriving while
    a message is mid-assembly abandons the partial silently, matching the
    decoder.
    """
    quarters: list[_Quarter] = []
    awaiting_anchor: list[_Quarter] = []
    running: int | None = None
    open_status: int | None = None
    need = 0
    got = 0
    msg_start = 0
    ordinal = 0

    for pos, b in enumerate(stream):
        if b >= 0xF8:
            if b in (START_BYTE, CONTINUE_BYTE):
                ordinal = 1 if b == START_BYTE else ordinal + 1
                if quarters and quarters[-1].end is None:
                    quarters[-1].end = msg_start if open_status is not None else pos
                quarter = _Quarter(ordinal)
                if open_status is None:
                    quarter.anchor = pos + 1
                else:
                    awaiting_anchor.append(quarter)
                quarters.append(quarter)
            # other real-time bytes: complete one-byte messages, no state change
        elif b >= 0x80:
            open_status = None  # abandon any partial
            if b <= 0xEF:
                running = b
                open_status, need, got, msg_start = b, _data_len(b), 0, pos
            else:
                running = None
                if _data_len(b):
                    open_status, need, got, msg_start = b, _data_len(b), 0, pos
        else:
            if open_status is None:
                if running is None:
                    raise StreamError(pos, f"data byte 0x{b:02x} with no status in effect")
                open_status, need, got, msg_start = running, _data_len(running), 0, pos
            got += 1
            if got == need:
                end = pos + 1
                status, open_status = open_status, None
                for quarter in awaiting_anchor:
                    quarter.anchor = end
                awaiting_anchor.clear()
                if (
                    content_channel is not None
                    and status <= 0xEF
                    and (status & 0x0F) + 1 == content_channel
                    and quarters
                ):
                    quarters[-1].last_ch_end = end

    if open_status is not None:
        raise StreamError(msg_start, "message unfinished at end of stream")
    if quarters and quarters[-1].end is None:
        quarters[-1].end = len(stream)
    return quarters


def splice_quarter_blocks(
    stream: bytes,
    block_for_quarter: Callable[[int], bytes],
    frame_order: str = "canonical",
    after_channel: int | None = None,
) -> bytes:
    """Insert ``block_for_quarter(ordinal)`` into each quarter of ``stream``.

    ``ordinal`` is the running marker count (Start resets it to 1).  Empty
    blocks insert nothing.  The input bytes are preserved in order.
    """
    if frame_order not in FRAME_ORDERS:
        raise ValueError(f"frame_order must be one of {FRAME_ORDERS}")
    quarters = _scan_quarters(bytes(stream), after_channel)
    inserts: list[tuple[int, bytes]] = []
    for quarter in quarters:
        block = block_for_quarter(quarter.ordinal)
        if not block:
            continue
        if after_channel is not None and quarter.last_ch_end is not None:
            offset = quarter.last_ch_end
        elif frame_order == "paper":
            offset = quarter.end
        else:
            offset = quarter.anchor
        inserts.append((offset, block))

    out = bytearray()
    prev = 0
    for offset, block in sorted(inserts, key=lambda item: item[0]):
        out += stream[prev:offset]
        out += block
        prev = offset
    out += stream[prev:]
    return bytes(out)

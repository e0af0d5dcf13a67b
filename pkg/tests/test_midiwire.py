"""Wire codec tests: byte-exact vocabulary, streaming decode, properties."""

import random

import pytest

from brickbox.midiwire import (
    ControlChange,
    DecodeError,
    DecoderState,
    NoteOn,
    Passthrough,
    Start,
    Continue,
    TimingClock,
    decode_stream,
    encode_message,
    encode_messages,
)


def test_encode_start():
    assert encode_message(Start()) == b"\xfa"


def test_encode_continue_and_clock():
    assert encode_message(Continue()) == b"\xfb"
    assert encode_message(TimingClock()) == b"\xf8"


def test_encode_all_notes_off_channel_10():
    assert encode_message(ControlChange(10, 0x7B, 0x00)) == b"\xb9\x7b\x00"


def test_encode_bass_drum_note_on():
    assert encode_message(NoteOn(10, 0x24, 0x64)) == b"\x99\x24\x64"


def test_encode_passthrough_verbatim():
    assert encode_message(Passthrough(b"\xc5\x07")) == b"\xc5\x07"


@pytest.mark.parametrize(
    "bad",
    [
        lambda: ControlChange(0, 0x7B, 0),
        lambda: ControlChange(17, 0x7B, 0),
        lambda: ControlChange(10, 0x80, 0),
        lambda: NoteOn(10, 0x24, 0x80),
        lambda: NoteOn(10, -1, 0x64),
        lambda: Passthrough(b""),
        lambda: Passthrough(b"\x24\x64"),
        lambda: Passthrough(b"\xc5\x07\x07"),
        lambda: Passthrough(b"\xf8\x00"),
    ],
)
def test_malformed_messages_rejected_at_construction(bad):
    with pytest.raises(ValueError):
        bad()


def test_decode_start():
    msgs, state = decode_stream(b"\xfa")
    assert msgs == [Start()]
    assert not state.has_partial


def test_decode_empty_input():
    msgs, state = decode_stream(b"")
    assert msgs == []
    assert not state.has_partial


def test_decode_realtime_interleaved_in_note_on():
    msgs, _ = decode_stream(b"\x99\xf8\x24\x64")
    assert msgs == [TimingClock(), NoteOn(10, 0x24, 0x64)]


def test_decode_split_across_calls():
    msgs1, state = decode_stream(b"\x99\x24")
    assert msgs1 == []
    assert state.has_partial
    msgs2, state = decode_stream(b"\x64", state)
    assert msgs2 == [NoteOn(10, 0x24, 0x64)]
    assert not state.has_partial


def test_decode_running_status_accepted():
    msgs, _ = decode_stream(b"\xb9\x7b\x00\x7b\x00")
    assert msgs == [ControlChange(10, 0x7B, 0), ControlChange(10, 0x7B, 0)]


def test_stray_data_byte_is_recoverable():
    msgs, state = decode_stream(b"\x42\xfa")
    assert msgs == [DecodeError(0, 0x42), Start()]
    assert not state.has_partial


def test_system_common_clears_running_status():
    # F3 (song select) takes one data byte, then running status is gone.
    msgs, _ = decode_stream(b"\x99\x24\x64\xf3\x05\x30")
    assert msgs == [
        NoteOn(10, 0x24, 0x64),
        Passthrough(b"\xf3\x05"),
        DecodeError(5, 0x30),
    ]


def test_new_status_abandons_partial():
    msgs, state = decode_stream(b"\x99\x24\xb0\x7b\x00")
    assert msgs == [ControlChange(1, 0x7B, 0)]
    assert not state.has_partial


def test_unknown_realtime_passes_through():
    msgs, _ = decode_stream(b"\xfc")
    assert msgs == [Passthrough(b"\xfc")]


def test_program_change_decodes_as_passthrough():
    msgs, _ = decode_stream(b"\xc5\x07")
    assert msgs == [Passthrough(b"\xc5\x07")]


# --- randomized properties -------------------------------------------------

_NOTE_POOL = [NoteOn, ControlChange]


def _random_message(rng: random.Random):
    kind = rng.randrange(8)
    if kind == 0:
        return Start()
    if kind == 1:
        return Continue()
    if kind == 2:
        return TimingClock()
    if kind == 3:
        return ControlChange(rng.randint(1, 16), rng.randint(0, 127), rng.randint(0, 127))
    if kind == 4:
        return NoteOn(rng.randint(1, 16), rng.randint(0, 127), rng.randint(0, 127))
    if kind == 5:  # program change
        return Passthrough(bytes([0xC0 | rng.randrange(16), rng.randint(0, 127)]))
    if kind == 6:  # pitch bend
        return Passthrough(bytes([0xE0 | rng.randrange(16), rng.randint(0, 127), rng.randint(0, 127)]))
    return Passthrough(b"\xf6")  # tune request


def random_messages(rng: random.Random, max_len: int = 8):
    return [_random_message(rng) for _ in range(rng.randint(0, max_len))]


def decode_in_chunks(data: bytes, cuts):
    """One-shot-equivalent decode through an arbitrary chunk partition."""
    state = DecoderState()
    out = []
    prev = 0
    for cut in sorted(cuts) + [len(data)]:
        msgs, state = decode_stream(data[prev:cut], state)
        out.extend(msgs)
        prev = cut
    return out, state


def test_round_trip_random_sequences():
    rng = random.Random(0xBEEF)
    for _ in range(500):
        msgs = random_messages(rng)
        decoded, state = decode_stream(encode_messages(msgs))
        assert decoded == msgs
        assert not state.has_partial


def test_split_invariance_random_sequences():
    rng = random.Random(0xFACE)
    for _ in range(500):
        msgs = random_messages(rng)
        data = encode_messages(msgs)
        cuts = sorted(rng.randrange(len(data) + 1) for _ in range(rng.randint(0, 4)))
        chunked, state = decode_in_chunks(data, cuts)
        assert chunked == msgs
        assert not state.has_partial


def test_timing_clock_interleave_invariance():
    rng = random.Random(0xC0DE)
    for _ in range(500):
        msg = ControlChange(rng.randint(1, 16), rng.randint(0, 127), rng.randint(0, 127))
        data = bytearray(encode_message(msg))
        n_clocks = rng.randint(1, 6)
        for _ in range(n_clocks):
            data.insert(rng.randint(1, len(data)), 0xF8)
        decoded, state = decode_stream(bytes(data))
        assert decoded.count(TimingClock()) == n_clocks
        assert [m for m in decoded if not isinstance(m, TimingClock)] == [msg]
        assert not state.has_partial

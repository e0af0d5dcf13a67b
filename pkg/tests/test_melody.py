"""Melody board tests: chords, pitch mapping, ADC routing, channel-1 merger."""

import numpy as np
import pytest

from brickbox import midiwire as mw
from brickbox.analog import MAX_BRICKS, REST, Note, ResistorModel
from brickbox.beatbox import RhythmGrid, merge_rhythm
from brickbox.errors import RangeError
from brickbox.melody import (
    ChordQuality,
    MelodyBoard,
    adc_channel,
    chord_notes,
    chord_quality,
    melody_block,
    merge_melody,
    midi_note,
    note_name,
    read_chord_flags,
    read_step,
    step_for_channel,
)
from brickbox.midiwire import decode_stream
from brickbox.transport import TransportConfig, clock_bytes

ALL_OFF_1 = b"\xb0\x7b\x00"


def board_with(step=0, height=1, minor=False, major=False):
    board = MelodyBoard.empty()
    board.set_tower(step, height)
    board.set_chord(step, "minor", minor)
    board.set_chord(step, "major", major)
    return board


def test_chord_quality_table():
    assert chord_quality(False, False) == ChordQuality.NO_CHORD
    assert chord_quality(True, False) == ChordQuality.MINOR
    assert chord_quality(False, True) == ChordQuality.MAJOR
    assert chord_quality(True, True) == ChordQuality.MAJOR


def test_midi_note_mapping():
    assert midi_note(1) == 60
    assert midi_note(2) == 61
    assert midi_note(11) == 70


def test_midi_note_range():
    with pytest.raises(RangeError):
        midi_note(0)
    with pytest.raises(RangeError):
        midi_note(12)


def test_note_names():
    assert note_name(1) == "C4"
    assert note_name(2) == "C#4"
    assert note_name(11) == "A#4"


def test_chord_notes_voicings():
    assert chord_notes(1, ChordQuality.MAJOR) == [48, 52, 55]
    assert chord_notes(1, ChordQuality.MINOR) == [48, 51, 55]
    assert chord_notes(7, ChordQuality.NO_CHORD) == []


def test_chord_notes_stay_in_midi_range():
    for i in range(1, MAX_BRICKS + 1):
        for quality in ChordQuality:
            assert all(0 <= note <= 127 for note in chord_notes(i, quality))


def test_adc_channel_split_and_inverse():
    assert adc_channel(0) == (0, 0)
    assert adc_channel(7) == (0, 7)
    assert adc_channel(8) == (1, 0)
    assert adc_channel(15) == (1, 7)
    seen = set()
    for step in range(16):
        chip, channel = adc_channel(step)
        assert step_for_channel(chip, channel) == step
        seen.add((chip, channel))
    assert len(seen) == 16


def test_read_step_nominal_heights():
    board = MelodyBoard.empty()
    for height in range(MAX_BRICKS + 1):
        board.set_tower(3, height)
        expected = REST if height == 0 else Note(height)
        assert read_step(board, 3) == expected


def test_read_step_toleranced_single_brick_never_misreads():
    board = board_with(step=9, height=1)
    rng = np.random.default_rng(5)
    for _ in range(500):
        assert read_step(board, 9, rng=rng) == Note(1)


def test_read_chord_flags_two_level_sensing():
    board = board_with(step=2, height=1, minor=True)
    assert read_chord_flags(board, 2) == (True, False)
    assert read_chord_flags(board, 0) == (False, False)


def test_melody_block_major_chord():
    board = board_with(height=1, major=True)
    assert melody_block(board, 1) == [
        mw.ControlChange(1, 0x7B, 0),
        mw.NoteOn(1, 60, 0x64),
        mw.NoteOn(1, 48, 0x64),
        mw.NoteOn(1, 52, 0x64),
        mw.NoteOn(1, 55, 0x64),
    ]


def test_melody_block_rest_ignores_chord_rows():
    board = board_with(height=0, minor=True, major=True)
    assert melody_block(board, 1) == [mw.ControlChange(1, 0x7B, 0)]


def test_melody_block_plain_top_note():
    board = board_with(height=11)
    assert melody_block(board, 1) == [
        mw.ControlChange(1, 0x7B, 0),
        mw.NoteOn(1, 70, 0x64),
    ]


def test_melody_block_note_on_count_is_0_1_or_4():
    rng = np.random.default_rng(11)
    for _ in range(100):
        board = MelodyBoard(
            heights=[int(rng.integers(0, 12)) for _ in range(16)],
            minor=[bool(rng.integers(0, 2)) for _ in range(16)],
            major=[bool(rng.integers(0, 2)) for _ in range(16)],
        )
        for quarter in range(1, 17):
            ons = sum(1 for m in melody_block(board, quarter) if isinstance(m, mw.NoteOn))
            assert ons in (0, 1, 4)


def test_merge_empty_board_adds_16_all_notes_off():
    cfg = TransportConfig()
    clock = clock_bytes(cfg)
    out = merge_melody(clock, MelodyBoard.empty(), cfg)
    assert out.count(ALL_OFF_1) == 16
    assert len(out) == len(clock) + 16 * 3


def test_merge_empty_input_is_empty():
    assert merge_melody(b"", MelodyBoard.empty(), TransportConfig()) == b""


def test_merge_melody_follows_rhythm_block():
    cfg = TransportConfig()
    grid = RhythmGrid.empty()
    grid.set_pad("bass", 0, True)
    board = board_with(height=1, major=True)
    with_rhythm = merge_rhythm(clock_bytes(cfg), grid, cfg)
    out = merge_melody(with_rhythm, board, cfg)
    # frame 1: marker, rhythm block, then the melody block, then clocks
    expected = (
        b"\xfa" + b"\xb9\x7b\x00" + b"\x99\x24\x64"
        + ALL_OFF_1 + b"\x90\x3c\x64\x90\x30\x64\x90\x34\x64\x90\x37\x64"
        + b"\xf8"
    )
    assert out.startswith(expected)


def test_merge_melody_follows_rhythm_in_paper_order():
    cfg = TransportConfig(frame_order="paper")
    grid = RhythmGrid.empty()
    grid.set_pad("box", 0, True)
    board = board_with(height=2)
    out = merge_melody(merge_rhythm(clock_bytes(cfg), grid, cfg), board, cfg)
    assert out.startswith(
        b"\xfa" + b"\xf8" * 24 + b"\xb9\x7b\x00\x99\x26\x64" + ALL_OFF_1 + b"\x90\x3d\x64\xfb"
    )


def test_merge_chaining_preserves_rhythm_stage_output():
    cfg = TransportConfig()
    grid = RhythmGrid.empty()
    grid.set_pad("charlie2", 4, True)
    board = board_with(step=4, height=3, minor=True)
    rhythm_stage = merge_rhythm(clock_bytes(cfg, 2), grid, cfg)
    out = merge_melody(rhythm_stage, board, cfg)
    it = iter(out)
    assert all(b in it for b in rhythm_stage)


def test_merge_inserts_only_channel_1_statuses():
    cfg = TransportConfig()
    clock = clock_bytes(cfg)
    board = board_with(height=5, major=True)
    out = merge_melody(clock, board, cfg)
    for b in set(out) - set(clock):
        assert b in (0xB0, 0x90) or b < 0x80


def test_merge_decodes_cleanly():
    cfg = TransportConfig()
    board = board_with(height=1, major=True)
    out = merge_melody(clock_bytes(cfg), board, cfg)
    msgs, state = decode_stream(out)
    assert not state.has_partial
    note_ons = [m for m in msgs if isinstance(m, mw.NoteOn)]
    assert len(note_ons) == 4  # only step 1 holds a tower
    assert all(m.channel == 1 for m in note_ons)


def test_full_chain_identity_through_readout():
    # Nominal resistors: a tower of n bricks always plays note n.
    cfg = TransportConfig()
    for n in range(1, MAX_BRICKS + 1):
        board = board_with(height=n)
        out = merge_melody(clock_bytes(cfg), board, cfg)
        msgs, _ = decode_stream(out)
        ons = [m for m in msgs if isinstance(m, mw.NoteOn)]
        assert ons == [mw.NoteOn(1, 59 + n, 0x64)]


def test_merge_respects_custom_model():
    # A slacker reference resistor shifts codes but nominal values still decode.
    model = ResistorModel(tol_ref=0.0, tol_brick=0.0)
    board = board_with(height=4)
    out = merge_melody(clock_bytes(TransportConfig()), board, TransportConfig(), model)
    msgs, _ = decode_stream(out)
    assert mw.NoteOn(1, 63, 0x64) in msgs

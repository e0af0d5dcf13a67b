"""Snapshot parsing/serialization, score rendering, and SMF export tests.

The SMF checks go through an independent reader implemented here from the
file-format layout, not through the writer's own code.
"""

import string
import struct

import pytest
from hypothesis import given, strategies as st

from brickbox.boardio import (
    ScoreLine,
    Snapshot,
    export_smf,
    parse_snapshot,
    serialize_snapshot,
    snapshot_to_dict,
    to_score,
    with_overrides,
)
from brickbox.beatbox import RhythmGrid
from brickbox.errors import ParseError, RangeError
from brickbox.melody import MelodyBoard
from brickbox.transport import TransportConfig


# --- independent SMF reader (oracle) ----------------------------------------


def read_smf(data: bytes):
    """Minimal SMF parser: returns (format, division, events, end_tick).

    Events are (abs_tick, kind, payload) with kind 'meta' or 'channel'.
    Supports running status, as any compliant reader must.
    """
    assert data[:4] == b"MThd"
    (hlen, fmt, ntrks, division) = struct.unpack(">IHHH", data[4:14])
    assert hlen == 6
    assert ntrks == 1
    pos = 14
    assert data[pos : pos + 4] == b"MTrk"
    (tlen,) = struct.unpack(">I", data[pos + 4 : pos + 8])
    pos += 8
    end = pos + tlen
    events = []
    tick = 0
    running = None
    saw_eot = False
    while pos < end:
        delta = 0
        while True:
            byte = data[pos]
            pos += 1
            delta = (delta << 7) | (byte & 0x7F)
            if not byte & 0x80:
                break
        tick += delta
        status = data[pos]
        if status == 0xFF:
            meta_type = data[pos + 1]
            length = data[pos + 2]
            payload = data[pos + 3 : pos + 3 + length]
            pos += 3 + length
            events.append((tick, "meta", (meta_type, payload)))
            if meta_type == 0x2F:
                saw_eot = True
            running = None
        else:
            if status >= 0x80:
                pos += 1
                running = status
            else:
                status = running
            assert status is not None, "data byte with no running status"
            n_data = 1 if status & 0xF0 in (0xC0, 0xD0) else 2
            payload = data[pos : pos + n_data]
            pos += n_data
            events.append((tick, "channel", bytes([status]) + payload))
    assert pos == end == len(data)
    assert saw_eot
    return fmt, division, events, tick


# --- parsing ----------------------------------------------------------------


SAMPLE = """\
# a saved construction
title Frère Jacques opening
bpm 96
rhythm.bass 1 0 0 0 1 0 0 0 1 0 0 0 1 0 0 0
rhythm.box 0 0 1 0 0 0 1 0 0 0 1 0 0 0 1 0
rhythm.charlie1 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0
rhythm.charlie2 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 1
melody 1 3 5 1 0 0 0 0 1 3 5 1 0 0 0 0
minor 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0
major 1 0 0 1 0 0 0 0 1 0 0 1 0 0 0 0
"""


def test_parse_sample():
    snap = parse_snapshot(SAMPLE)
    assert snap.title == "Frère Jacques opening"
    assert snap.config.bpm == 96
    assert snap.grid.pressed("bass", 0)
    assert not snap.grid.pressed("bass", 1)
    assert snap.grid.pressed("charlie2", 15)
    assert snap.board.heights[0] == 1
    assert snap.board.heights[2] == 5
    assert snap.board.major[0]
    assert not snap.board.minor[0]


def test_parse_melody_row_places_towers():
    text = "melody 1 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0\n"
    snap = parse_snapshot(text)
    assert snap.board.heights == [1] + [0] * 15


def test_parse_defaults():
    snap = parse_snapshot("")
    assert snap == Snapshot()
    assert snap.config.bpm == 120
    assert snap.title == ""


def test_parse_rejects_overheight_tower():
    text = "melody 0 0 12 0 0 0 0 0 0 0 0 0 0 0 0 0\n"
    with pytest.raises(RangeError) as exc:
        parse_snapshot(text)
    assert exc.value.line == 1


def test_parse_rejects_out_of_range_bpm():
    with pytest.raises(RangeError) as exc:
        parse_snapshot("title x\nbpm 209\n")
    assert exc.value.line == 2


def test_parse_rejects_unknown_key():
    with pytest.raises(ParseError) as exc:
        parse_snapshot("bpm 100\n\n# ok\nvolume 9\n")
    assert exc.value.line == 4
    assert "volume" in exc.value.reason


def test_parse_rejects_duplicate_key():
    with pytest.raises(ParseError) as exc:
        parse_snapshot("bpm 100\nbpm 101\n")
    assert exc.value.line == 2


def test_parse_rejects_bad_tokens():
    with pytest.raises(ParseError) as exc:
        parse_snapshot("bpm fast\n")
    assert exc.value.line == 1
    with pytest.raises(ParseError):
        parse_snapshot("melody 1 2 three 0 0 0 0 0 0 0 0 0 0 0 0 0\n")
    with pytest.raises(ParseError):
        parse_snapshot("minor 1 2 0 0 0 0 0 0 0 0 0 0 0 0 0 0\n")


def test_parse_rejects_wrong_row_length():
    with pytest.raises(ParseError) as exc:
        parse_snapshot("melody 1 2 3\n")
    assert "16" in str(exc.value)


def test_serialize_empty_snapshot():
    text = serialize_snapshot(Snapshot())
    lines = text.splitlines()
    assert lines[0] == "bpm 120"
    assert "title" not in text
    for line in lines[1:]:
        assert line.split()[1:] == ["0"] * 16


def test_serialize_canonicalizes_spacing():
    messy = "bpm   96\nmelody  1 0 0 0 0 0 0 0 0 0 0 0 0 0  0 0\n"
    snap = parse_snapshot(messy)
    canonical = serialize_snapshot(snap)
    assert "bpm 96\n" in canonical
    assert parse_snapshot(canonical) == snap


def test_title_spaces_preserved():
    snap = parse_snapshot("title two  spaces # not a comment\n")
    assert snap.title == "two  spaces # not a comment"
    assert parse_snapshot(serialize_snapshot(snap)) == snap


_titles = st.text(
    alphabet=string.ascii_letters + string.digits + " #'!-éñ",
    max_size=30,
).map(str.strip)


@st.composite
def snapshots(draw):
    grid = RhythmGrid([[draw(st.booleans()) for _ in range(16)] for _ in range(4)])
    board = MelodyBoard(
        heights=[draw(st.integers(0, 11)) for _ in range(16)],
        minor=[draw(st.booleans()) for _ in range(16)],
        major=[draw(st.booleans()) for _ in range(16)],
    )
    config = TransportConfig(bpm=draw(st.integers(1, 208)))
    return Snapshot(config, grid, board, draw(_titles))


@given(snapshots())
def test_round_trip_random_snapshots(snap):
    assert parse_snapshot(serialize_snapshot(snap)) == snap


# --- score ------------------------------------------------------------------


def test_to_score_names_and_rests():
    board = MelodyBoard.empty()
    board.set_tower(0, 1)
    board.set_tower(1, 2)
    board.set_chord(1, "minor", True)
    score = to_score(board)
    assert score.entries[0] == ("C4", "-")
    assert score.entries[1] == ("C#4", "m")
    assert score.entries[2] == ("rest", "-")


def test_to_score_major_wins():
    board = MelodyBoard.empty()
    board.set_tower(5, 11)
    board.set_chord(5, "minor", True)
    board.set_chord(5, "major", True)
    assert to_score(board).entries[5] == ("A#4", "M")


def test_to_score_injective_in_heights():
    seen = set()
    for h in range(12):
        board = MelodyBoard.empty()
        board.set_tower(0, h)
        seen.add(to_score(board).entries[0][0])
    assert len(seen) == 12


def test_score_line_length_enforced():
    with pytest.raises(ValueError):
        ScoreLine((("C4", "-"),))


# --- SMF export -------------------------------------------------------------


def test_smf_header_layout():
    data = export_smf(Snapshot(), cycles=1)
    assert data[:4] == b"MThd"
    assert struct.unpack(">IHHH", data[4:14]) == (6, 0, 1, 24)


def test_smf_tempo_meta_at_120():
    _, division, events, _ = read_smf(export_smf(Snapshot(), 1))
    assert division == 24
    tempos = [p for t, kind, (m, p) in [(t, k, v) for t, k, v in events if k == "meta"] if m == 0x51]
    assert tempos == [(500000).to_bytes(3, "big")]


def test_smf_empty_snapshot_census():
    _, _, events, end_tick = read_smf(export_smf(Snapshot(), 1))
    channel = [payload for _, kind, payload in events if kind == "channel"]
    assert len(channel) == 32
    assert channel.count(b"\xb9\x7b\x00") == 16
    assert channel.count(b"\xb0\x7b\x00") == 16
    assert end_tick == 384


def test_smf_quarters_land_on_tick_grid():
    snap = parse_snapshot(SAMPLE)
    _, _, events, end_tick = read_smf(export_smf(snap, 2))
    assert end_tick == 2 * 384
    for tick, kind, payload in events:
        if kind == "channel":
            assert tick % 24 == 0
    # bass pad at steps 0,4,8,12 -> note-on 0x24 at those quarters, both cycles
    bass_ticks = [t for t, k, p in events if k == "channel" and p == b"\x99\x24\x64"]
    assert bass_ticks == [t * 24 for t in (0, 4, 8, 12, 16, 20, 24, 28)]


def test_smf_omits_realtime_bytes():
    data = export_smf(parse_snapshot(SAMPLE), 1)
    body = data[14:]
    assert b"\xfa" not in body[8:]  # no Start byte inside the track
    assert 0xF8 not in body[8:]


def test_smf_tempo_rounding():
    snap = with_overrides(Snapshot(), bpm=208)
    _, _, events, _ = read_smf(export_smf(snap, 1))
    tempos = [p for _, k, (m, p) in [(t, k, v) for t, k, v in events if k == "meta"] if m == 0x51]
    assert int.from_bytes(tempos[0], "big") == round(60_000_000 / 208)


def test_smf_rejects_zero_cycles():
    with pytest.raises(RangeError):
        export_smf(Snapshot(), 0)


def test_with_overrides_replaces_transport_fields():
    snap = with_overrides(Snapshot(), bpm=77, frame_order="paper")
    assert snap.config.bpm == 77
    assert snap.config.frame_order == "paper"
    assert with_overrides(snap).config == snap.config


def test_snapshot_to_dict_mirrors_fields():
    snap = parse_snapshot(SAMPLE)
    d = snapshot_to_dict(snap)
    assert d["bpm"] == 96
    assert d["rhythm"]["bass"][0] == 1
    assert d["melody"][2] == 5
    assert d["major"][0] == 1
    assert d["title"].startswith("Frère")

"""Virtual brick-built music machine.

A faithful software counterpart of a tangible sequencer: a 24-PPQN MIDI
clock drives sixteen quarter-note frames per cycle; a 4x16 pad grid adds
channel-10 percussion blocks; pitch towers read out through a simulated
resistor divider and 10-bit ADC to place channel-1 melody notes and
chords.  Boards persist as plain-text snapshots, render to Standard MIDI
Files, and can be played live over a JSON session endpoint.
"""

from .analog import (
    NOMINAL,
    Note,
    NoteDecision,
    ResistorModel,
    Rest,
    decide_note,
    misclassification_rate,
    sample_tower,
)
from .beatbox import RhythmGrid, merge_rhythm, rhythm_block
from .boardio import (
    ScoreLine,
    Snapshot,
    export_smf,
    load_snapshot,
    parse_snapshot,
    serialize_snapshot,
    to_score,
)
from .errors import ConfigError, ParseError, RangeError, StreamError
from .melody import ChordQuality, MelodyBoard, melody_block, merge_melody
from .midiwire import (
    ControlChange,
    DecodeError,
    DecoderState,
    MidiMessage,
    NoteOn,
    Passthrough,
    Start,
    Continue,
    TimingClock,
    decode_stream,
    encode_message,
)
from .pipeline import FULL, PipelineSpec, run_offline
from .session import LiveSession, SessionEngine, run_live
from .transport import QuarterFrame, TickScheduler, TransportConfig, clock_cycle, tick_period

__version__ = "0.1.0"

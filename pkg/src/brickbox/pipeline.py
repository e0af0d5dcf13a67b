"""Stage composition: clock through the optional rhythm and melody mergers.

The chain mirrors the physical boxes: the clock source always runs first,
the beatbox and melody stages are each detachable, and removing one
removes exactly its channel's bytes from the output without touching the
rest of the stream.
"""

from __future__ import annotations

from dataclasses import dataclass

from .analog import NOMINAL, ResistorModel
from .beatbox import merge_rhythm, rhythm_block
from .boardio import Snapshot
from .errors import RangeError
from .melody import melody_block, merge_melody
from .transport import QuarterFrame, clock_bytes, marker_for, validate


@dataclass(frozen=True)
class PipelineSpec:
    """Which detachable stages run; the clock is always present and first."""

    beatbox: bool = True
    melody: bool = True

    @property
    def stages(self) -> tuple[str, ...]:
        names = ["clock"]
        if self.beatbox:
            names.append("beatbox")
        if self.melody:
            names.append("melody")
        return tuple(names)


FULL = PipelineSpec()


def run_offline(
    snapshot: Snapshot,
    cycles: int = 1,
    pipeline: PipelineSpec = FULL,
    model: ResistorModel = NOMINAL,
) -> bytes:
    """Render ``cycles`` cycles of the configured pipeline to wire bytes.

    Deterministic: the same snapshot, cycle count, pipeline and frame
    order always produce identical bytes.
    """
    if cycles < 1:
        raise RangeError(f"cycles {cycles} must be >= 1")
    config = snapshot.config
    validate(config)
    stream = clock_bytes(config, cycles)
    if pipeline.beatbox:
        stream = merge_rhythm(stream, snapshot.grid, config)
    if pipeline.melody:
        stream = merge_melody(stream, snapshot.board, config, model)
    return stream


def build_frame(
    snapshot: Snapshot,
    quarter: int,
    pipeline: PipelineSpec = FULL,
    model: ResistorModel = NOMINAL,
) -> QuarterFrame:
    """Assemble one quarter's frame from the current boards.

    This is the live path: the sequencer reads the boards once per
    quarter boundary and plays the frame it builds here.
    """
    return QuarterFrame(
        index=quarter,
        marker=marker_for(quarter),
        rhythm=rhythm_block(snapshot.grid, quarter) if pipeline.beatbox else [],
        melody=melody_block(snapshot.board, quarter, model) if pipeline.melody else [],
    )

// Edit gestures: board clicks become session commands (at most one each).
// The UI stays optimism-free: commands go to the server and the board
// only changes when the confirming state event comes back.

import {
  ChordRow,
  InstrumentName,
  MAX_BPM,
  MAX_HEIGHT,
  MIN_BPM,
  NUM_STEPS,
  SessionCommand,
} from "./protocol.js";
import { UiBoardState } from "./state.js";

export type Gesture =
  | { kind: "pad"; instrument: InstrumentName; step: number }
  | { kind: "tower"; step: number; height: number }
  | { kind: "chord"; step: number; row: ChordRow }
  | { kind: "bpm"; value: number }
  | { kind: "transport"; action: "start" | "stop" };

export type EditResult = { command: SessionCommand } | { notice: string };

function badStep(step: number): boolean {
  return !Number.isInteger(step) || step < 0 || step >= NUM_STEPS;
}

/**
 * Map a gesture to a command against the current (server-confirmed) board.
 *
 * Tower clicks build to the clicked height; clicking the current top
 * brick unstacks it (height-1).  Out-of-range gestures are dropped with a
 * notice, including a click above a full-height tower.
 */
export function dispatchEdit(gesture: Gesture, state: UiBoardState): EditResult {
  if (state.connection !== "connected") {
    return { notice: "not connected" };
  }
  switch (gesture.kind) {
    case "pad": {
      if (badStep(gesture.step)) return { notice: `no pad at step ${gesture.step}` };
      const current = state.snapshot.rhythm[gesture.instrument][gesture.step];
      return {
        command: { cmd: "set_pad", instrument: gesture.instrument, step: gesture.step, on: !current },
      };
    }
    case "tower": {
      if (badStep(gesture.step)) return { notice: `no tower at step ${gesture.step}` };
      if (!Number.isInteger(gesture.height) || gesture.height < 1 || gesture.height > MAX_HEIGHT) {
        return { notice: `towers hold at most ${MAX_HEIGHT} bricks` };
      }
      const current = state.snapshot.melody[gesture.step] ?? 0;
      const height = gesture.height === current ? current - 1 : gesture.height;
      return { command: { cmd: "set_tower", step: gesture.step, height } };
    }
    case "chord": {
      if (badStep(gesture.step)) return { notice: `no chord cell at step ${gesture.step}` };
      const current = state.snapshot[gesture.row][gesture.step];
      return {
        command: { cmd: "set_chord", step: gesture.step, row: gesture.row, on: !current },
      };
    }
    case "bpm": {
      if (!Number.isInteger(gesture.value) || gesture.value < MIN_BPM || gesture.value > MAX_BPM) {
        return { notice: `bpm must be ${MIN_BPM}-${MAX_BPM}` };
      }
      return { command: { cmd: "set_bpm", value: gesture.value } };
    }
    case "transport":
      return { command: { cmd: "transport", action: gesture.action } };
  }
}

// Session protocol types: mirrors the server's newline-delimited JSON wire.
// Steps are 0-based on the wire; playhead quarters are 1-16.

export const INSTRUMENTS = ["bass", "box", "charlie1", "charlie2"] as const;
export type InstrumentName = (typeof INSTRUMENTS)[number];

export const NUM_STEPS = 16;
export const MAX_HEIGHT = 11;
export const MIN_BPM = 1;
export const MAX_BPM = 208;

export type ChordRow = "minor" | "major";

export interface SnapshotData {
  title: string;
  bpm: number;
  frame_order: string;
  rhythm: Record<InstrumentName, number[]>;
  melody: number[];
  minor: number[];
  major: number[];
}

export type SessionCommand =
  | { cmd: "set_pad"; instrument: InstrumentName; step: number; on: boolean }
  | { cmd: "set_tower"; step: number; height: number }
  | { cmd: "set_chord"; step: number; row: ChordRow; on: boolean }
  | { cmd: "set_bpm"; value: number }
  | { cmd: "transport"; action: "start" | "stop" }
  | { cmd: "get_state" };

export type SessionEvent =
  | { event: "state"; snapshot: SnapshotData }
  | { event: "playhead"; quarter: number; cycle: number }
  | { event: "midi"; quarter: number; cycle: number; bytes: string }
  | { event: "error"; message: string };

function isRow(value: unknown, length: number): value is number[] {
  return Array.isArray(value) && value.length === length && value.every((v) => typeof v === "number");
}

export function isSnapshotData(value: unknown): value is SnapshotData {
  if (typeof value !== "object" || value === null) return false;
  const snap = value as Record<string, unknown>;
  if (typeof snap.title !== "string" || typeof snap.bpm !== "number") return false;
  const rhythm = snap.rhythm as Record<string, unknown> | undefined;
  if (typeof rhythm !== "object" || rhythm === null) return false;
  for (const name of INSTRUMENTS) {
    if (!isRow(rhythm[name], NUM_STEPS)) return false;
  }
  return isRow(snap.melody, NUM_STEPS) && isRow(snap.minor, NUM_STEPS) && isRow(snap.major, NUM_STEPS);
}

/** Structural validation of one wire event; null when it is not one. */
export function parseEvent(raw: unknown): SessionEvent | null {
  if (typeof raw !== "object" || raw === null) return null;
  const obj = raw as Record<string, unknown>;
  switch (obj.event) {
    case "state":
      return isSnapshotData(obj.snapshot) ? { event: "state", snapshot: obj.snapshot } : null;
    case "playhead":
      if (typeof obj.quarter === "number" && typeof obj.cycle === "number"
          && obj.quarter >= 1 && obj.quarter <= NUM_STEPS) {
        return { event: "playhead", quarter: obj.quarter, cycle: obj.cycle };
      }
      return null;
    case "midi":
      if (typeof obj.quarter === "number" && typeof obj.cycle === "number"
          && typeof obj.bytes === "string" && /^[0-9a-f]*$/.test(obj.bytes)) {
        return { event: "midi", quarter: obj.quarter, cycle: obj.cycle, bytes: obj.bytes };
      }
      return null;
    case "error":
      return typeof obj.message === "string" ? { event: "error", message: obj.message } : null;
    default:
      return null;
  }
}

const NOTE_NAMES = ["C", "C#", "D", "D#", "E", "F", "F#", "G", "G#", "A", "A#", "B"] as const;

/** Note label for a tower height (1 -> "C4"); empty steps are rests. */
export function noteName(height: number): string {
  if (height < 1 || height > MAX_HEIGHT) return "rest";
  const midi = 60 + (height - 1);
  return `${NOTE_NAMES[midi % 12]}${Math.floor(midi / 12) - 1}`;
}

export function emptySnapshot(): SnapshotData {
  const zeros = () => new Array(NUM_STEPS).fill(0) as number[];
  return {
    title: "",
    bpm: 120,
    frame_order: "canonical",
    rhythm: { bass: zeros(), box: zeros(), charlie1: zeros(), charlie2: zeros() },
    melody: zeros(),
    minor: zeros(),
    major: zeros(),
  };
}

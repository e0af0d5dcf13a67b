// UI state: a mirror of the server-confirmed snapshot plus live context.
// The board is never mutated locally; only events received from the
// session replace it (single source of truth).

import { SessionEvent, SnapshotData, emptySnapshot, parseEvent } from "./protocol.js";

export type ConnectionState = "connected" | "disconnected";

export interface Playhead {
  quarter: number; // 1-16
  cycle: number;
}

export interface Notice {
  id: number;
  text: string;
}

export interface UiBoardState {
  snapshot: SnapshotData;
  playhead: Playhead | null;
  connection: ConnectionState;
  notices: Notice[];
  lastMidi: { quarter: number; cycle: number; bytes: string } | null;
}

const MAX_NOTICES = 5;
let nextNoticeId = 1;

export function emptyState(): UiBoardState {
  return {
    snapshot: emptySnapshot(),
    playhead: null,
    connection: "disconnected",
    notices: [],
    lastMidi: null,
  };
}

export function withNotice(state: UiBoardState, text: string): UiBoardState {
  const notices = [...state.notices, { id: nextNoticeId++, text }].slice(-MAX_NOTICES);
  return { ...state, notices };
}

export function withConnection(state: UiBoardState, connection: ConnectionState): UiBoardState {
  return { ...state, connection };
}

/**
 * Fold one wire event into the state.  Unparseable events leave the board
 * untouched and surface as a notice.
 */
export function applyEvent(state: UiBoardState, raw: unknown): UiBoardState {
  const event: SessionEvent | null = parseEvent(raw);
  if (event === null) {
    return withNotice(state, `malformed event: ${JSON.stringify(raw)?.slice(0, 80)}`);
  }
  switch (event.event) {
    case "state":
      return { ...state, snapshot: event.snapshot };
    case "playhead":
      return { ...state, playhead: { quarter: event.quarter, cycle: event.cycle } };
    case "midi":
      return { ...state, lastMidi: { quarter: event.quarter, cycle: event.cycle, bytes: event.bytes } };
    case "error":
      return withNotice(state, event.message);
  }
}

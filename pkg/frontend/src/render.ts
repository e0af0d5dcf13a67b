// Board rendering: state in, plain visual tree out.  The tree is DOM-free
// so it can be asserted on headlessly; dom.ts realizes it in a browser.

import { INSTRUMENTS, MAX_HEIGHT, NUM_STEPS, noteName } from "./protocol.js";
import { UiBoardState } from "./state.js";

export interface VNode {
  tag: string;
  attrs: Record<string, string>;
  children: (VNode | string)[];
}

export function h(tag: string, attrs: Record<string, string> = {}, children: (VNode | string)[] = []): VNode {
  return { tag, attrs, children };
}

function cls(...names: (string | false)[]): string {
  return names.filter(Boolean).join(" ");
}

/** Column index (0-based step) the playhead currently highlights, or -1. */
function playheadStep(state: UiBoardState): number {
  return state.playhead ? state.playhead.quarter - 1 : -1;
}

function transportBar(state: UiBoardState, disabled: boolean): VNode {
  const off: Record<string, string> = disabled ? { disabled: "true" } : {};
  const playhead = state.playhead
    ? `quarter ${state.playhead.quarter} / cycle ${state.playhead.cycle}`
    : "stopped";
  return h("div", { class: "transport" }, [
    h("button", { ...off, "data-action": "start" }, ["start"]),
    h("button", { ...off, "data-action": "stop" }, ["stop"]),
    h("label", {}, [
      "bpm ",
      h("input", {
        ...off,
        type: "number",
        min: "1",
        max: "208",
        value: String(state.snapshot.bpm),
        "data-control": "bpm",
      }),
    ]),
    h("span", { class: "playhead-label" }, [playhead]),
  ]);
}

function padGrid(state: UiBoardState, disabled: boolean, at: number): VNode {
  const rows = INSTRUMENTS.map((name) =>
    h("tr", { "data-instrument": name }, [
      h("th", {}, [name]),
      ...Array.from({ length: NUM_STEPS }, (_, step) => {
        const on = state.snapshot.rhythm[name][step] === 1;
        return h(
          "td",
          {
            class: cls("pad", on && "on", step === at && "playing"),
            "data-pad": name,
            "data-step": String(step),
            ...(disabled ? { "data-disabled": "true" } : {}),
          },
          [on ? "●" : ""],
        );
      }),
    ]),
  );
  return h("table", { class: "pads" }, rows);
}

function towerColumn(state: UiBoardState, step: number, disabled: boolean, at: number): VNode {
  const height = state.snapshot.melody[step] ?? 0;
  const cells = [];
  // cap affordance: clicking it tries to stack one more brick
  cells.push(
    h("td", {
      class: "tower-cap",
      "data-tower": String(step),
      "data-height": String(height + 1),
      ...(disabled ? { "data-disabled": "true" } : {}),
    }, ["+"]),
  );
  for (let level = MAX_HEIGHT; level >= 1; level--) {
    cells.push(
      h("td", {
        class: cls("brick", level <= height && "filled", step === at && "playing"),
        "data-tower": String(step),
        "data-height": String(level),
        ...(disabled ? { "data-disabled": "true" } : {}),
      }, []),
    );
  }
  cells.push(h("td", { class: "note-label" }, [height ? noteName(height) : "rest"]));
  return h("tr", { class: "tower-column", "data-step": String(step) }, cells);
}

function chordRow(state: UiBoardState, row: "minor" | "major", disabled: boolean, at: number): VNode {
  return h("tr", { "data-chord-row": row }, [
    h("th", {}, [row]),
    ...Array.from({ length: NUM_STEPS }, (_, step) => {
      const on = state.snapshot[row][step] === 1;
      return h(
        "td",
        {
          class: cls("chord", on && "on", step === at && "playing"),
          "data-chord": row,
          "data-step": String(step),
          ...(disabled ? { "data-disabled": "true" } : {}),
        },
        [on ? (row === "minor" ? "m" : "M") : ""],
      );
    }),
  ]);
}

/**
 * Full board tree: banner when disconnected, transport bar, 4x16 pad grid,
 * 16 tower columns with note labels, chord toggle rows, and notices.  The
 * playhead column is highlighted across all sections.
 */
export function renderBoard(state: UiBoardState): VNode {
  const disabled = state.connection !== "connected";
  const at = playheadStep(state);
  const children: (VNode | string)[] = [];
  if (disabled) {
    children.push(h("div", { class: "banner" }, ["disconnected - controls disabled"]));
  }
  children.push(transportBar(state, disabled));
  children.push(h("h2", {}, ["beatbox"]));
  children.push(padGrid(state, disabled, at));
  children.push(h("h2", {}, ["melody"]));
  // towers render as 16 table rows (one per step) for simple markup;
  // styling turns them into columns
  children.push(
    h("table", { class: "towers" },
      Array.from({ length: NUM_STEPS }, (_, step) => towerColumn(state, step, disabled, at))),
  );
  children.push(
    h("table", { class: "chords" }, [
      chordRow(state, "minor", disabled, at),
      chordRow(state, "major", disabled, at),
    ]),
  );
  if (state.notices.length) {
    children.push(
      h("ul", { class: "notices" }, state.notices.map((n) => h("li", {}, [n.text]))),
    );
  }
  return h("div", { class: cls("board", disabled && "disconnected") }, children);
}

// --- tree helpers for tests and the DOM layer -------------------------------

export function findAll(root: VNode, predicate: (node: VNode) => boolean): VNode[] {
  const out: VNode[] = [];
  const walk = (node: VNode) => {
    if (predicate(node)) out.push(node);
    for (const child of node.children) {
      if (typeof child !== "string") walk(child);
    }
  };
  walk(root);
  return out;
}

export function textOf(node: VNode): string {
  return node.children.map((c) => (typeof c === "string" ? c : textOf(c))).join("");
}

// Realize the visual tree in a browser document and translate clicks and
// inputs back into gestures via data attributes.

import { Gesture } from "./gestures.js";
import { InstrumentName } from "./protocol.js";
import { VNode } from "./render.js";

export function toDom(node: VNode | string, doc: Document): Node {
  if (typeof node === "string") return doc.createTextNode(node);
  const el = doc.createElement(node.tag);
  for (const [key, value] of Object.entries(node.attrs)) {
    if (key === "disabled") {
      (el as HTMLButtonElement).disabled = true;
    } else {
      el.setAttribute(key, value);
    }
  }
  for (const child of node.children) el.appendChild(toDom(child, doc));
  return el;
}

export function replaceChildren(root: Element, tree: VNode): void {
  const doc = root.ownerDocument;
  root.replaceChildren(toDom(tree, doc));
}

/** Map a click target to a gesture, or null for inert elements. */
export function gestureFromClick(target: Element): Gesture | null {
  const el = target.closest("[data-pad],[data-tower],[data-chord],[data-action]");
  if (!el || el.hasAttribute("data-disabled")) return null;
  const pad = el.getAttribute("data-pad");
  if (pad) {
    return { kind: "pad", instrument: pad as InstrumentName, step: Number(el.getAttribute("data-step")) };
  }
  const tower = el.getAttribute("data-tower");
  if (tower !== null) {
    return { kind: "tower", step: Number(tower), height: Number(el.getAttribute("data-height")) };
  }
  const chord = el.getAttribute("data-chord");
  if (chord === "minor" || chord === "major") {
    return { kind: "chord", step: Number(el.getAttribute("data-step")), row: chord };
  }
  const action = el.getAttribute("data-action");
  if (action === "start" || action === "stop") {
    return { kind: "transport", action };
  }
  return null;
}

export function gestureFromBpmInput(input: HTMLInputElement): Gesture {
  return { kind: "bpm", value: Number(input.value) };
}

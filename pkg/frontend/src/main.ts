// Browser entry: connect over WebSocket (see bridge.ts), render on every
// state change, and forward board gestures to the session.

import { SessionClient } from "./client.js";
import { gestureFromBpmInput, gestureFromClick, replaceChildren } from "./dom.js";
import { renderBoard } from "./render.js";
import { connectWebSocket } from "./ws.js";

async function start(): Promise<void> {
  const root = document.getElementById("app");
  if (!root) throw new Error("missing #app element");

  const params = new URLSearchParams(location.search);
  const url = params.get("session") ?? `ws://${location.hostname}:8766`;

  let client: SessionClient;
  try {
    client = new SessionClient(await connectWebSocket(url));
  } catch (err) {
    root.textContent = `cannot connect to ${url}: ${err}`;
    return;
  }

  client.onChange((state) => replaceChildren(root, renderBoard(state)));

  root.addEventListener("click", (ev) => {
    const gesture = gestureFromClick(ev.target as Element);
    if (gesture) client.edit(gesture);
  });
  root.addEventListener("change", (ev) => {
    const el = ev.target as HTMLInputElement;
    if (el.matches('input[data-control="bpm"]')) {
      client.edit(gestureFromBpmInput(el));
    }
  });
}

start();

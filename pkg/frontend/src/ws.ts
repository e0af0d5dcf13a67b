// Browser transport: WebSocket carrying the same newline-framed JSON
// (via the bridge in bridge.ts, since browsers cannot open raw TCP).

import { Transport } from "./client.js";

export function connectWebSocket(url: string): Promise<Transport> {
  return new Promise((resolve, reject) => {
    const socket = new WebSocket(url);
    socket.onerror = () => reject(new Error(`cannot reach ${url}`));
    socket.onopen = () => {
      resolve({
        send: (line) => socket.send(line),
        onData: (cb) => {
          socket.onmessage = (msg) => cb(String(msg.data));
        },
        onClose: (cb) => {
          socket.onclose = () => cb();
        },
        close: () => socket.close(),
      });
    };
  });
}

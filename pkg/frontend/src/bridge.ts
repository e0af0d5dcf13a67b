// WebSocket <-> TCP bridge: browsers cannot open raw TCP, so this node
// process forwards newline-framed JSON between a WebSocket client and the
// sequencer's session endpoint, byte-for-byte in both directions.
//
//   node dist/bridge.js [--session HOST:PORT] [--listen PORT]
//
// Defaults: session 127.0.0.1:8765, WebSocket on 8766.

import * as net from "node:net";
import { WebSocketServer, WebSocket } from "ws";

function arg(name: string, fallback: string): string {
  const index = process.argv.indexOf(`--${name}`);
  return index >= 0 && process.argv[index + 1] ? process.argv[index + 1]! : fallback;
}

const [sessionHost, sessionPort] = (() => {
  const raw = arg("session", "127.0.0.1:8765");
  const at = raw.lastIndexOf(":");
  return [raw.slice(0, at), Number(raw.slice(at + 1))] as const;
})();
const listenPort = Number(arg("listen", "8766"));

const server = new WebSocketServer({ port: listenPort });
console.log(`bridge: ws://0.0.0.0:${listenPort} <-> tcp ${sessionHost}:${sessionPort}`);

server.on("connection", (ws: WebSocket) => {
  const tcp = net.createConnection({ host: sessionHost, port: sessionPort });
  tcp.setEncoding("utf-8");
  tcp.on("data", (chunk: string | Buffer) => ws.send(chunk.toString()));
  tcp.on("close", () => ws.close());
  tcp.on("error", () => ws.close());
  ws.on("message", (data) => {
    const text = data.toString();
    tcp.write(text.endsWith("\n") ? text : text + "\n");
  });
  ws.on("close", () => tcp.destroy());
});

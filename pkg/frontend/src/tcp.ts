// Node-only transport: plain TCP to the session endpoint (tests, tools,
// and the WebSocket bridge).

import * as net from "node:net";

import { Transport } from "./client.js";

export function connectTcp(host: string, port: number): Promise<Transport> {
  return new Promise((resolve, reject) => {
    const socket = net.createConnection({ host, port });
    socket.setEncoding("utf-8");
    socket.once("error", reject);
    socket.once("connect", () => {
      socket.removeListener("error", reject);
      resolve({
        send: (line) => socket.write(line),
        onData: (cb) => socket.on("data", (chunk: string | Buffer) => cb(chunk.toString())),
        onClose: (cb) => {
          socket.on("close", cb);
          socket.on("error", () => socket.destroy());
        },
        close: () => socket.destroy(),
      });
    });
  });
}

// Session client: one duplex line transport in, a stream of UI states out.

import { createLineParser, frameLine } from "./framing.js";
import { Gesture, dispatchEdit } from "./gestures.js";
import { SessionCommand } from "./protocol.js";
import { UiBoardState, applyEvent, emptyState, withConnection, withNotice } from "./state.js";

/** Minimal duplex line stream; tcp.ts and ws.ts provide implementations. */
export interface Transport {
  send(line: string): void;
  onData(cb: (chunk: string) => void): void;
  onClose(cb: () => void): void;
  close(): void;
}

export class SessionClient {
  state: UiBoardState = emptyState();

  private readonly listeners: ((state: UiBoardState) => void)[] = [];

  constructor(private readonly transport: Transport) {
    const parser = createLineParser(
      (value) => this.update((s) => applyEvent(s, value)),
      (raw) => this.update((s) => withNotice(s, `unreadable line: ${raw.slice(0, 80)}`)),
    );
    transport.onData((chunk) => parser.feed(chunk));
    transport.onClose(() => this.update((s) => withConnection(s, "disconnected")));
    this.update((s) => withConnection(s, "connected"));
  }

  onChange(listener: (state: UiBoardState) => void): void {
    this.listeners.push(listener);
    listener(this.state);
  }

  send(command: SessionCommand): void {
    this.transport.send(frameLine(command));
  }

  /** Translate a gesture against the current board; at most one command. */
  edit(gesture: Gesture): void {
    const result = dispatchEdit(gesture, this.state);
    if ("command" in result) {
      this.send(result.command);
    } else {
      this.update((s) => withNotice(s, result.notice));
    }
  }

  refresh(): void {
    this.send({ cmd: "get_state" });
  }

  close(): void {
    this.transport.close();
  }

  private update(fn: (state: UiBoardState) => UiBoardState): void {
    this.state = fn(this.state);
    for (const listener of this.listeners) listener(this.state);
  }
}

// Newline-delimited JSON framing over an arbitrary byte/string stream.

export interface LineParser {
  /** Feed a chunk; complete lines are parsed and dispatched in order. */
  feed(chunk: string): void;
}

export function createLineParser(
  onMessage: (value: unknown) => void,
  onError?: (rawLine: string) => void,
): LineParser {
  let buffer = "";
  return {
    feed(chunk: string) {
      buffer += chunk;
      const lines = buffer.split("\n");
      buffer = lines.pop()!;
      for (const line of lines) {
        const trimmed = line.trim();
        if (!trimmed) continue;
        try {
          onMessage(JSON.parse(trimmed));
        } catch {
          onError?.(trimmed);
        }
      }
    },
  };
}

export function frameLine(value: unknown): string {
  return JSON.stringify(value) + "\n";
}

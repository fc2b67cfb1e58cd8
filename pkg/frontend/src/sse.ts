import type { StreamEvent } from "./types.js";

/**
 * Incremental parser for the service's SSE stream
 * (`event: <type>\ndata: <json>\n\n` frames). Feed it chunks in whatever
 * sizes the network delivers; complete events come out in order.
 */
export class SSEParser {
  private buffer = "";

  feed(chunk: string): StreamEvent[] {
    this.buffer += chunk;
    const events: StreamEvent[] = [];
    let boundary: number;
    while ((boundary = this.buffer.indexOf("\n\n")) !== -1) {
      const frame = this.buffer.slice(0, boundary);
      this.buffer = this.buffer.slice(boundary + 2);
      const event = parseFrame(frame);
      if (event !== null) events.push(event);
    }
    return events;
  }

  /** Unconsumed bytes (a frame still awaiting its terminator). */
  get pending(): string {
    return this.buffer;
  }
}

const EVENT_TYPES = new Set(["step", "verdict", "error", "done"]);

function parseFrame(frame: string): StreamEvent | null {
  let type = "";
  let data = "";
  for (const line of frame.split("\n")) {
    if (line.startsWith("event:")) {
      type = line.slice("event:".length).trim();
    } else if (line.startsWith("data:")) {
      data += line.slice("data:".length).trimStart();
    }
    // Comment lines (":keepalive") and unknown fields are ignored per SSE.
  }
  if (!EVENT_TYPES.has(type) || data === "") return null;
  return { type, data: JSON.parse(data) } as StreamEvent;
}

/** Parse a fully buffered SSE body (e.g. a replayed finished stream). */
export function parseSSEBody(body: string): StreamEvent[] {
  return new SSEParser().feed(body);
}

import { describe, expect, it } from "vitest";

import { SSEParser, parseSSEBody } from "../src/sse.js";

const BODY =
  `event: step\ndata: {"depth": 1, "question": "Q?", "answer": "A", "evidence": [], "accepted": true, "rejection_reason": null}\n\n` +
  `event: verdict\ndata: {"label": "Refuted", "rationale": "Therefore, the final answer is: False."}\n\n` +
  `event: done\ndata: {"trace_id": "abc"}\n\n`;

describe("SSEParser", () => {
  it("parses a complete body", () => {
    const events = parseSSEBody(BODY);
    expect(events.map((e) => e.type)).toEqual(["step", "verdict", "done"]);
    expect(events[0].data).toMatchObject({ depth: 1, question: "Q?" });
    expect(events[1].data).toMatchObject({ label: "Refuted" });
  });

  it("is chunking-invariant", () => {
    const whole = parseSSEBody(BODY);
    for (const size of [1, 3, 7, 16, 64]) {
      const parser = new SSEParser();
      const events = [];
      for (let i = 0; i < BODY.length; i += size) {
        events.push(...parser.feed(BODY.slice(i, i + size)));
      }
      expect(events).toEqual(whole);
      expect(parser.pending).toBe("");
    }
  });

  it("holds an incomplete frame until its terminator arrives", () => {
    const parser = new SSEParser();
    expect(parser.feed('event: done\ndata: {"trace_id": "x"}')).toEqual([]);
    expect(parser.pending).not.toBe("");
    const events = parser.feed("\n\n");
    expect(events).toEqual([{ type: "done", data: { trace_id: "x" } }]);
  });

  it("ignores comments and unknown event types", () => {
    const events = parseSSEBody(
      `:keepalive\n\nevent: mystery\ndata: {}\n\nevent: done\ndata: {"trace_id": "x"}\n\n`,
    );
    expect(events.map((e) => e.type)).toEqual(["done"]);
  });
});

import { SSEParser } from "./sse.js";
import { applyEvent, initialState, stateFromTrace, type TraceViewState } from "./state.js";
import type { ApiClient } from "./api.js";

export interface Subscription {
  close(): void;
}

const POLL_INTERVAL_MS = 2000;

/**
 * Follow a trace: stream SSE events over fetch, falling back to polling
 * GET /api/trace/{id} every 2 s if the stream drops before the run ends.
 * `onUpdate` receives the full view state after every change.
 */
export function followTrace(
  api: ApiClient,
  traceId: string,
  onUpdate: (state: TraceViewState) => void,
  fetchFn: typeof fetch = fetch,
): Subscription {
  let closed = false;
  let pollTimer: ReturnType<typeof setTimeout> | null = null;
  let state = initialState();

  const emit = () => {
    if (!closed) onUpdate(state);
  };

  const poll = async () => {
    if (closed) return;
    try {
      state = stateFromTrace(await api.getTrace(traceId));
      emit();
      if (state.finished) return;
    } catch {
      // transient; keep polling
    }
    pollTimer = setTimeout(poll, POLL_INTERVAL_MS);
  };

  const stream = async () => {
    try {
      const resp = await fetchFn(api.eventsUrl(traceId));
      if (!resp.ok || resp.body === null) throw new Error(`stream unavailable (${resp.status})`);
      const reader = resp.body.getReader();
      const decoder = new TextDecoder();
      const parser = new SSEParser();
      for (;;) {
        const { done, value } = await reader.read();
        if (closed) {
          void reader.cancel();
          return;
        }
        if (done) break;
        for (const event of parser.feed(decoder.decode(value, { stream: true }))) {
          state = applyEvent(state, event);
          emit();
        }
      }
      if (!state.finished) void poll();
    } catch {
      if (!closed) void poll();
    }
  };

  void stream();
  return {
    close() {
      closed = true;
      if (pollTimer !== null) clearTimeout(pollTimer);
    },
  };
}

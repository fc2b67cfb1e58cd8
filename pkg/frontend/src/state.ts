import type { Step, StreamEvent, Trace, Verdict } from "./types.js";

/**
 * View state for one open trace. Events are folded in the order received;
 * replay-then-follow on the server side means a mid-run subscriber folds
 * the same sequence a from-the-start subscriber would.
 */
export interface TraceViewState {
  steps: Step[];
  verdict: Verdict | null;
  errorDetail: string | null;
  finished: boolean;
}

export function initialState(): TraceViewState {
  return { steps: [], verdict: null, errorDetail: null, finished: false };
}

export function applyEvent(state: TraceViewState, event: StreamEvent): TraceViewState {
  switch (event.type) {
    case "step":
      return { ...state, steps: [...state.steps, event.data] };
    case "verdict":
      return { ...state, verdict: event.data };
    case "error":
      return { ...state, errorDetail: event.data.detail, finished: true };
    case "done":
      return { ...state, finished: true };
  }
}

export function applyEvents(state: TraceViewState, events: StreamEvent[]): TraceViewState {
  return events.reduce(applyEvent, state);
}

/**
 * Rebuild view state from a stored trace JSON. Invariant: for a finished
 * trace this equals folding the streamed events, so polling fallback and
 * history views render identically to a live stream.
 */
export function stateFromTrace(trace: Trace): TraceViewState {
  return {
    steps: [...trace.steps],
    verdict: trace.verdict,
    errorDetail: trace.status === "error" ? trace.error_detail : null,
    finished: trace.status !== "running",
  };
}

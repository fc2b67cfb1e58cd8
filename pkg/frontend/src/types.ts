// Wire types mirroring the service's trace JSON. The UI is a pure API
// client: every displayed fact comes from these payloads.

export type VerdictLabel = "Supported" | "Refuted";

export interface Evidence {
  source_id: string;
  title: string | null;
  text: string;
  score: number | null;
}

export interface Step {
  depth: number;
  question: string;
  answer: string;
  evidence: Evidence[];
  accepted: boolean;
  rejection_reason: string | null;
}

export interface Verdict {
  label: VerdictLabel;
  rationale: string;
}

export interface ClaimInfo {
  id: string;
  text: string;
  gold_label: string | null;
}

export type TraceStatus = "running" | "done" | "error";

export interface Trace {
  trace_id: string;
  claim: ClaimInfo;
  qa_backend: string;
  status: TraceStatus;
  steps: Step[];
  verdict: Verdict | null;
  error_detail: string | null;
  started_at: string | null;
  finished_at: string | null;
}

export interface TraceRow {
  trace_id: string;
  claim_text: string;
  status: TraceStatus;
  started_at: string;
}

export interface ExampleClaim {
  text: string;
}

export type StreamEvent =
  | { type: "step"; data: Step }
  | { type: "verdict"; data: Verdict }
  | { type: "error"; data: { detail: string } }
  | { type: "done"; data: { trace_id: string } };

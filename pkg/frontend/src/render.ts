import type { Evidence, ExampleClaim, Step, TraceRow, Verdict } from "./types.js";
import type { TraceViewState } from "./state.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;")
    .replace(/'/g, "&#39;");
}

function renderEvidence(evidence: Evidence[]): string {
  if (evidence.length === 0) return "";
  const items = evidence
    .map((e) => {
      const title = e.title ? `<span class="evidence-title">${escapeHtml(e.title)}</span>` : "";
      const score =
        e.score !== null ? `<span class="evidence-score">${e.score.toFixed(3)}</span>` : "";
      return `<li>${title}${score}<p>${escapeHtml(e.text)}</p></li>`;
    })
    .join("");
  return `<aside class="evidence"><h4>Evidence</h4><ul>${items}</ul></aside>`;
}

export function renderStepCard(step: Step): string {
  const badge = `<span class="depth-badge">Step ${step.depth}</span>`;
  const qa =
    `<p class="question">Q: ${escapeHtml(step.question)}</p>` +
    `<p class="answer">A: ${escapeHtml(step.answer)}</p>`;
  if (!step.accepted) {
    const reason = escapeHtml(step.rejection_reason ?? "rejected");
    return (
      `<details class="step-card rejected">` +
      `<summary>${badge}<span class="rejected-label">Rejected: ${reason}</span></summary>` +
      `${qa}${renderEvidence(step.evidence)}</details>`
    );
  }
  return `<article class="step-card accepted">${badge}${qa}${renderEvidence(step.evidence)}</article>`;
}

export function renderVerdictPanel(verdict: Verdict): string {
  const cls = verdict.label === "Supported" ? "supported" : "refuted";
  return (
    `<section class="verdict-panel ${cls}">` +
    `<h3>Prediction with rationale</h3>` +
    `<p class="verdict-label">${verdict.label}</p>` +
    `<p class="rationale">${escapeHtml(verdict.rationale)}</p></section>`
  );
}

export function renderTraceView(state: TraceViewState): string {
  const parts = state.steps.map(renderStepCard);
  if (state.verdict) parts.push(renderVerdictPanel(state.verdict));
  if (state.errorDetail) {
    parts.push(`<section class="error-panel"><p>${escapeHtml(state.errorDetail)}</p></section>`);
  }
  if (!state.finished) {
    parts.push(`<p class="spinner">Checking…</p>`);
  }
  return `<div class="trace-view">${parts.join("")}</div>`;
}

export function renderHistory(rows: TraceRow[]): string {
  if (rows.length === 0) {
    return `<p class="empty-state">No traces yet. Check a claim to get started.</p>`;
  }
  const items = rows
    .map(
      (r) =>
        `<li><a href="#/trace/${escapeHtml(r.trace_id)}">` +
        `<span class="history-claim">${escapeHtml(r.claim_text)}</span>` +
        `<span class="history-status">${escapeHtml(r.status)}</span>` +
        `<time>${escapeHtml(r.started_at)}</time></a></li>`,
    )
    .join("");
  return `<ul class="history">${items}</ul>`;
}

export function renderClaimEntry(
  examples: ExampleClaim[],
  backends: string[],
  backendsFailed = false,
): string {
  const options = examples
    .map((e) => `<option value="${escapeHtml(e.text)}">${escapeHtml(e.text)}</option>`)
    .join("");
  const backendOptions = backends
    .map((b) => `<option value="${escapeHtml(b)}">${escapeHtml(b)}</option>`)
    .join("");
  const selector = backendsFailed
    ? `<select id="backend" disabled></select><button id="retry-backends" type="button">Retry</button>`
    : `<select id="backend">${backendOptions}</select>`;
  return (
    `<form id="claim-form">` +
    `<textarea id="claim" placeholder="Enter a claim to check"></textarea>` +
    `<select id="example"><option value="">Pick an example…</option>${options}</select>` +
    selector +
    `<button id="submit" type="submit" disabled>Check</button>` +
    `<p id="form-error" class="form-error" hidden></p></form>`
  );
}

import { ApiClient, ApiError } from "./api.js";
import {
  renderClaimEntry,
  renderHistory,
  renderTraceView,
  escapeHtml,
} from "./render.js";
import { followTrace, type Subscription } from "./stream.js";

declare global {
  interface Window {
    CLAIMCHECK_API_BASE?: string;
  }
}

const api = new ApiClient(window.CLAIMCHECK_API_BASE ?? "");
const root = document.getElementById("app") as HTMLElement;
let subscription: Subscription | null = null;

function teardown(): void {
  subscription?.close();
  subscription = null;
}

async function showClaimEntry(): Promise<void> {
  let examples: { text: string }[] = [];
  let backends: string[] = [];
  let backendsFailed = false;
  try {
    [examples, backends] = await Promise.all([api.getExamples(), api.getBackends()]);
  } catch {
    backendsFailed = true;
  }
  root.innerHTML = renderClaimEntry(examples, backends, backendsFailed);

  const form = document.getElementById("claim-form") as HTMLFormElement;
  const claim = document.getElementById("claim") as HTMLTextAreaElement;
  const example = document.getElementById("example") as HTMLSelectElement;
  const backend = document.getElementById("backend") as HTMLSelectElement;
  const submit = document.getElementById("submit") as HTMLButtonElement;
  const formError = document.getElementById("form-error") as HTMLParagraphElement;

  const sync = () => {
    submit.disabled = claim.value.trim() === "";
  };
  claim.addEventListener("input", sync);
  example.addEventListener("change", () => {
    if (example.value) claim.value = example.value;
    sync();
  });
  document.getElementById("retry-backends")?.addEventListener("click", () => {
    void showClaimEntry();
  });
  form.addEventListener("submit", (e) => {
    e.preventDefault();
    void (async () => {
      try {
        const traceId = await api.submitCheck({
          claim_text: claim.value,
          qa_backend: backend.value || undefined,
        });
        location.hash = `#/trace/${traceId}`;
      } catch (err) {
        formError.hidden = false;
        formError.textContent = err instanceof ApiError ? err.detail : String(err);
      }
    })();
  });
}

function showTrace(traceId: string): void {
  root.innerHTML = `<div class="trace-view"><p class="spinner">Loading…</p></div>`;
  void api.getTrace(traceId).then(
    () => {
      subscription = followTrace(api, traceId, (state) => {
        root.innerHTML = renderTraceView(state);
      });
    },
    (err) => {
      root.innerHTML =
        err instanceof ApiError && err.status === 404
          ? `<p class="not-found">Trace ${escapeHtml(traceId)} was not found.</p>`
          : `<p class="error-panel">${escapeHtml(String(err))}</p>`;
    },
  );
}

async function showHistory(): Promise<void> {
  try {
    root.innerHTML = renderHistory(await api.listTraces());
  } catch (err) {
    root.innerHTML = `<p class="error-panel">${escapeHtml(String(err))}</p>`;
  }
}

function route(): void {
  teardown();
  const hash = location.hash;
  const traceMatch = /^#\/trace\/([0-9a-f]+)$/.exec(hash);
  if (traceMatch) {
    showTrace(traceMatch[1]);
  } else if (hash === "#/history") {
    void showHistory();
  } else {
    void showClaimEntry();
  }
}

window.addEventListener("hashchange", route);
route();

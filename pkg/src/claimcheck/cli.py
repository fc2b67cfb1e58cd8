"""Command-line front door: single checks, corpus indexing, batch
evaluation, and serving the HTTP API.

stdout carries data, stderr carries diagnostics; exit codes: 0 success,
1 usage/input error, 2 trace-level check error.
"""

from __future__ import annotations

import hashlib
import json
import sys
from pathlib import Path
from typing import Optional

import click

from . import evalharness, retrieval
from .core import QA_BACKEND_NAMES, Claim
from .genbackend import BackendConfig, make_backend
from .pipeline import Pipeline, PipelineConfig
from .prompts import DemoBank
from .qa import ReciterReader, RetrieverReader, Seq2Seq


def _load_backend_config(path: Optional[str]) -> dict[str, BackendConfig]:
    """Backend config file: {"default": {...}, "<role>": {...}, ...}."""
    if path is None:
        raise click.UsageError(
            "--backend-config is required (no default remote endpoint is assumed)"
        )
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    if "default" not in raw:
        raise click.UsageError("backend config must contain a 'default' entry")
    return {name: BackendConfig.from_dict(cfg) for name, cfg in raw.items()}


def _build_pipeline(
    qa_backend: str,
    max_depth: int,
    backend_configs: dict[str, BackendConfig],
    bank: DemoBank,
    index_path: Optional[str] = None,
    retrieval_k: int = 3,
) -> Pipeline:
    handles = {name: make_backend(cfg) for name, cfg in backend_configs.items()}
    default = handles["default"]
    role_backends = {
        role: handles.get(role, default)
        for role in ("verifier", "question_generator", "validator", "reasoner")
    }
    qa_handle = handles.get("qa", default)
    if qa_backend == "retriever_reader":
        if index_path is None:
            raise click.UsageError("retriever_reader requires --index <snapshot>")
        qa = RetrieverReader(retrieval.load_snapshot(index_path), qa_handle, k=retrieval_k)
    elif qa_backend == "seq2seq":
        qa = Seq2Seq(qa_handle)
    elif qa_backend == "reciter_reader":
        qa = ReciterReader(qa_handle, bank=bank)
    else:
        raise click.UsageError(
            f"unknown qa backend {qa_backend!r}; valid: {', '.join(QA_BACKEND_NAMES)}"
        )
    config = PipelineConfig(max_depth=max_depth, qa_backend=qa_backend)
    return Pipeline(config, role_backends, qa, bank=bank)


def _load_bank(demo_bank: Optional[str]) -> DemoBank:
    return DemoBank.from_file(demo_bank) if demo_bank else DemoBank.default()


@click.group()
def main() -> None:
    """Question-guided claim verification toolkit."""


@main.command()
@click.option("--claim", "claim_text", required=True, help="Claim text to verify.")
@click.option("--qa-backend", default="reciter_reader", show_default=True,
              type=click.Choice(QA_BACKEND_NAMES))
@click.option("--max-depth", default=5, show_default=True, type=int)
@click.option("--trace-out", type=click.Path(dir_okay=False), default=None)
@click.option("--backend-config", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--demo-bank", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--index", "index_path", type=click.Path(exists=True, dir_okay=False), default=None,
              help="Index snapshot for the retriever_reader backend.")
def check(claim_text, qa_backend, max_depth, trace_out, backend_config, demo_bank, index_path):
    """Verify a single claim and print the step-by-step result."""
    bank = _load_bank(demo_bank)
    pipeline = _build_pipeline(
        qa_backend, max_depth, _load_backend_config(backend_config), bank, index_path
    )
    claim = Claim(id="cli", text=claim_text)
    # Deterministic id so identical scripted runs produce identical traces.
    trace_id = hashlib.sha256(claim_text.encode("utf-8")).hexdigest()[:32]

    def on_event(kind: str, payload) -> None:
        if kind == "step":
            flag = "accepted" if payload.accepted else f"rejected ({payload.rejection_reason})"
            click.echo(f"[depth {payload.depth}] Q: {payload.question}")
            click.echo(f"[depth {payload.depth}] A: {payload.answer}  -- {flag}")

    trace = pipeline.run_check(claim, trace_id=trace_id, on_event=on_event)
    if trace_out:
        Path(trace_out).write_text(trace.to_json(), encoding="utf-8")
    if trace.status == "error":
        click.echo(f"check failed: {trace.error_detail}", err=True)
        sys.exit(2)
    click.echo(f"VERDICT: {trace.verdict.label.value}")
    click.echo(trace.verdict.rationale)


@main.command()
@click.option("--corpus", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False))
@click.option("--k1", default=retrieval.DEFAULT_K1, show_default=True, type=float)
@click.option("--b", default=retrieval.DEFAULT_B, show_default=True, type=float)
def index(corpus, out_path, k1, b):
    """Build a BM25 index snapshot from a JSONL paragraph corpus."""
    try:
        docs = retrieval.load_corpus(corpus)
        idx = retrieval.build_index(docs, k1=k1, b=b)
    except retrieval.RetrievalError as exc:
        click.echo(str(exc), err=True)
        sys.exit(1)
    retrieval.save_snapshot(idx, out_path)
    click.echo(f"N={idx.doc_count} avg_doc_len={idx.avg_doc_len}")


@main.command("eval")
@click.option("--dataset", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--format", "fmt", default="native", show_default=True,
              type=click.Choice(evalharness.DATASET_FORMATS))
@click.option("--out", "out_path", type=click.Path(dir_okay=False), default=None)
@click.option("--concurrency", default=1, show_default=True, type=int)
@click.option("--qa-backend", default="reciter_reader", show_default=True,
              type=click.Choice(QA_BACKEND_NAMES))
@click.option("--max-depth", default=5, show_default=True, type=int)
@click.option("--backend-config", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--demo-bank", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--index", "index_path", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--trace-dir", type=click.Path(file_okay=False), default=None)
def eval_cmd(dataset, fmt, out_path, concurrency, qa_backend, max_depth,
             backend_config, demo_bank, index_path, trace_dir):
    """Run the batch evaluation protocol and print the metrics table."""
    bank = _load_bank(demo_bank)
    pipeline = _build_pipeline(
        qa_backend, max_depth, _load_backend_config(backend_config), bank, index_path
    )
    try:
        loaded = evalharness.load_dataset(dataset, format=fmt)
        report = evalharness.run_eval(
            loaded, pipeline, concurrency=concurrency, trace_dir=trace_dir,
            dataset_name=Path(dataset).name,
        )
    except evalharness.EvalError as exc:
        click.echo(str(exc), err=True)
        sys.exit(1)
    if loaded.skipped:
        click.echo(f"skipped: {loaded.skipped}")
    if out_path:
        Path(out_path).write_text(report.to_json(), encoding="utf-8")
    click.echo(report.to_text())


@main.command()
@click.option("--port", default=8080, show_default=True, type=int)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--store-dir", required=True, type=click.Path(file_okay=False))
@click.option("--qa-backend", default="reciter_reader", show_default=True,
              type=click.Choice(QA_BACKEND_NAMES))
@click.option("--backend-config", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--demo-bank", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--index", "index_path", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--static-dir", type=click.Path(file_okay=False), default=None,
              help="Optional built web UI to serve at /.")
@click.option("--cors-origin", multiple=True, default=("*",), show_default=True)
def serve(port, host, store_dir, qa_backend, backend_config, demo_bank, index_path,
          static_dir, cors_origin):
    """Serve the HTTP API (and optionally the web UI)."""
    import uvicorn

    from .service import create_app

    bank = _load_bank(demo_bank)
    configs = _load_backend_config(backend_config)

    def pipeline_factory(backend_name: str, max_depth: Optional[int]) -> Pipeline:
        return _build_pipeline(
            backend_name, max_depth or 5, configs, bank, index_path
        )

    try:
        app = create_app(store_dir, pipeline_factory, cors_origins=tuple(cors_origin),
                         static_dir=static_dir)
    except OSError as exc:
        click.echo(f"store dir not usable: {exc}", err=True)
        sys.exit(1)
    try:
        uvicorn.run(app, host=host, port=port, log_level="warning")
    except SystemExit:
        raise
    except OSError as exc:
        click.echo(f"cannot bind {host}:{port}: {exc}", err=True)
        sys.exit(1)


if __name__ == "__main__":
    main()

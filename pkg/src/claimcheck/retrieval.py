"""Paragraph corpus ingestion, inverted index, and Okapi BM25 scoring.

In-memory index with a deterministic binary snapshot (magic "QIDX1").
Scale target is desk scale (up to ~1e6 paragraphs), not a full web dump.
"""

from __future__ import annotations

import json
import math
import re
import struct
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

SNAPSHOT_MAGIC = b"QIDX1"
SNAPSHOT_VERSION = 1

DEFAULT_K1 = 0.9
DEFAULT_B = 0.4

_TOKEN_RE = re.compile(r"[0-9a-z]+")


class RetrievalError(Exception):
    pass


class DuplicateId(RetrievalError):
    pass


class EmptyIndex(RetrievalError):
    pass


class CorpusParseError(RetrievalError):
    pass


class SnapshotFormatError(RetrievalError):
    pass


@dataclass(frozen=True)
class CorpusDoc:
    id: str
    title: str
    text: str

    def __post_init__(self) -> None:
        if not self.text:
            raise ValueError("corpus doc text must be non-empty")


def tokenize(text: str) -> list[str]:
    """Lowercase and split on any non-alphanumeric run; no stemming or stopwords."""
    return _TOKEN_RE.findall(text.lower())


@dataclass
class Index:
    docs: list[CorpusDoc]
    postings: dict[str, list[tuple[int, int]]]  # term -> [(doc_ordinal, tf)], sorted
    doc_lengths: list[int]
    avg_doc_len: float
    k1: float = DEFAULT_K1
    b: float = DEFAULT_B

    @property
    def doc_count(self) -> int:
        return len(self.docs)


def build_index(
    docs: Iterable[CorpusDoc], k1: float = DEFAULT_K1, b: float = DEFAULT_B
) -> Index:
    docs = list(docs)
    if not docs:
        raise EmptyIndex("cannot build an index over zero documents")
    seen: set[str] = set()
    for doc in docs:
        if doc.id in seen:
            raise DuplicateId(f"duplicate corpus doc id {doc.id!r}")
        seen.add(doc.id)

    postings: dict[str, list[tuple[int, int]]] = {}
    doc_lengths: list[int] = []
    for ordinal, doc in enumerate(docs):
        tokens = tokenize(doc.text)
        doc_lengths.append(len(tokens))
        counts: dict[str, int] = {}
        for tok in tokens:
            counts[tok] = counts.get(tok, 0) + 1
        for term, tf in counts.items():
            postings.setdefault(term, []).append((ordinal, tf))

    # Ordinal order is already ascending by construction; sort defensively
    # so snapshots stay canonical.
    for plist in postings.values():
        plist.sort()

    avg = sum(doc_lengths) / len(doc_lengths)
    return Index(docs=docs, postings=postings, doc_lengths=doc_lengths, avg_doc_len=avg, k1=k1, b=b)


def _idf(index: Index, df: int) -> float:
    n = index.doc_count
    return math.log(1.0 + (n - df + 0.5) / (df + 0.5))


def bm25_score(index: Index, query_terms: Iterable[str], doc_ordinal: int) -> float:
    """Okapi BM25 over distinct query terms; absent terms contribute 0."""
    if not (0 <= doc_ordinal < index.doc_count):
        raise RetrievalError(f"doc ordinal {doc_ordinal} out of range")
    length = index.doc_lengths[doc_ordinal]
    norm = index.k1 * (1.0 - index.b + index.b * length / index.avg_doc_len)
    score = 0.0
    for term in set(query_terms):
        plist = index.postings.get(term)
        if not plist:
            continue
        tf = 0
        for ordinal, term_freq in plist:
            if ordinal == doc_ordinal:
                tf = term_freq
                break
        if tf == 0:
            continue
        score += _idf(index, len(plist)) * tf * (index.k1 + 1.0) / (tf + norm)
    return score


def search(index: Index, query: str, k: int) -> list[tuple[int, float]]:
    """Top-k ordinals with score > 0; ties broken by smaller ordinal."""
    if k < 1:
        raise ValueError("k must be >= 1")
    terms = set(tokenize(query))
    accum: dict[int, float] = {}
    for term in terms:
        plist = index.postings.get(term)
        if not plist:
            continue
        idf = _idf(index, len(plist))
        for ordinal, tf in plist:
            length = index.doc_lengths[ordinal]
            norm = index.k1 * (1.0 - index.b + index.b * length / index.avg_doc_len)
            accum[ordinal] = accum.get(ordinal, 0.0) + idf * tf * (index.k1 + 1.0) / (tf + norm)
    ranked = sorted(
        ((o, s) for o, s in accum.items() if s > 0.0),
        key=lambda pair: (-pair[1], pair[0]),
    )
    return ranked[:k]


def load_corpus(path: str | Path) -> list[CorpusDoc]:
    """Read a JSON Lines corpus: one {"id","title","text"} object per line."""
    docs: list[CorpusDoc] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                row = json.loads(line)
                docs.append(
                    CorpusDoc(id=str(row["id"]), title=row.get("title", ""), text=row["text"])
                )
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                raise CorpusParseError(f"bad corpus line {lineno}: {exc}")
    return docs


def _section(payload: bytes) -> bytes:
    return struct.pack("<Q", len(payload)) + payload


def save_snapshot(index: Index, path: str | Path) -> None:
    """Write the index as header + length-prefixed JSON sections.

    Layout: magic "QIDX1", u32 version, u64 N, f64 k1, f64 b, then three
    sections (u64 byte length + UTF-8 JSON): docs, doc_lengths, postings
    with terms sorted lexicographically. Identical corpora produce
    byte-identical snapshots.
    """
    header = SNAPSHOT_MAGIC + struct.pack(
        "<IQdd", SNAPSHOT_VERSION, index.doc_count, index.k1, index.b
    )
    docs_json = json.dumps(
        [{"id": d.id, "title": d.title, "text": d.text} for d in index.docs],
        ensure_ascii=False,
        separators=(",", ":"),
    ).encode("utf-8")
    lengths_json = json.dumps(index.doc_lengths, separators=(",", ":")).encode("utf-8")
    postings_json = json.dumps(
        {term: index.postings[term] for term in sorted(index.postings)},
        separators=(",", ":"),
    ).encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(_section(docs_json))
        fh.write(_section(lengths_json))
        fh.write(_section(postings_json))


def load_snapshot(path: str | Path) -> Index:
    with open(path, "rb") as fh:
        blob = fh.read()
    if blob[: len(SNAPSHOT_MAGIC)] != SNAPSHOT_MAGIC:
        raise SnapshotFormatError("not an index snapshot (bad magic)")
    offset = len(SNAPSHOT_MAGIC)
    version, n, k1, b = struct.unpack_from("<IQdd", blob, offset)
    if version != SNAPSHOT_VERSION:
        raise SnapshotFormatError(f"unsupported snapshot version {version}")
    offset += struct.calcsize("<IQdd")

    sections: list[bytes] = []
    for _ in range(3):
        (length,) = struct.unpack_from("<Q", blob, offset)
        offset += 8
        sections.append(blob[offset : offset + length])
        offset += length

    docs = [CorpusDoc(id=d["id"], title=d["title"], text=d["text"]) for d in json.loads(sections[0])]
    doc_lengths = json.loads(sections[1])
    postings = {
        term: [(o, tf) for o, tf in plist] for term, plist in json.loads(sections[2]).items()
    }
    if len(docs) != n:
        raise SnapshotFormatError("doc count mismatch in snapshot")
    avg = sum(doc_lengths) / len(doc_lengths)
    return Index(docs=docs, postings=postings, doc_lengths=doc_lengths, avg_doc_len=avg, k1=k1, b=b)

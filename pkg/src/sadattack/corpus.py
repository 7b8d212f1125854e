"""JSONL corpora: one record per line with ``id``, ``text`` and ``label`` or ``reference``."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterator

BUNDLED = {"sentiment": "sentiment.jsonl", "translation": "translation.jsonl"}


@dataclass(frozen=True)
class CorpusRecord:
    id: str
    text: str
    label: str | None = None
    reference: str | None = None
    meta: dict = field(default_factory=dict, compare=False)

    @classmethod
    def from_dict(cls, data: dict) -> CorpusRecord:
        if "id" not in data or "text" not in data:
            raise ValueError("record needs 'id' and 'text'")
        if not str(data["text"]).strip():
            raise ValueError(f"record {data['id']!r} has empty text")
        extra = {k: v for k, v in data.items() if k not in {"id", "text", "label", "reference"}}
        return cls(str(data["id"]), data["text"], data.get("label"), data.get("reference"), extra)


def iter_records(lines) -> Iterator[CorpusRecord]:
    """Parse records lazily; raises ``ValueError`` naming the bad line number."""
    seen: set[str] = set()
    for lineno, line in enumerate(lines, 1):
        if not line.strip():
            continue
        try:
            rec = CorpusRecord.from_dict(json.loads(line))
        except (json.JSONDecodeError, ValueError) as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
        if rec.id in seen:
            raise ValueError(f"line {lineno}: duplicate id {rec.id!r}")
        seen.add(rec.id)
        yield rec


def read_corpus(path: str | Path) -> Iterator[CorpusRecord]:
    """Stream records from a JSONL file, or from a bundled corpus by name."""
    if str(path) in BUNDLED:
        yield from bundled_corpus(str(path))
        return
    with open(path, encoding="utf-8") as f:
        yield from iter_records(f)


def bundled_corpus(name: str) -> list[CorpusRecord]:
    """``"sentiment"`` (200 labelled sentences) or ``"translation"`` (100 En->toy-Fr pairs)."""
    text = (resources.files("sadattack") / "data" / BUNDLED[name]).read_text(encoding="utf-8")
    return list(iter_records(text.splitlines()))

"""Documentation corpus: authoritative NetLogo reference entries.

The corpus is a JSON Lines file, one entry per line:

    {"id": ..., "kind": "primitive" | "example-model" | "guide",
     "name": ..., "signature"?: ..., "categories": [...],
     "body": ..., "url": ...}

Entries of kind "primitive" additionally carry ``primitive_kind``
("command" | "reporter"), ``arity_min`` and ``arity_max`` (null for
unbounded), which feed the syntax checker's dictionary.

Every entry must have a non-empty url so search hits stay citable.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable

ENTRY_KINDS = ("primitive", "example-model", "guide")


class CorpusError(Exception):
    """Base class for corpus loading failures."""


class CorpusParseError(CorpusError):
    def __init__(self, line: int, reason: str):
        self.line = line
        self.reason = reason
        super().__init__(f"line {line}: {reason}")


class DuplicateId(CorpusError):
    def __init__(self, entry_id: str):
        self.entry_id = entry_id
        super().__init__(f"duplicate corpus id: {entry_id}")


@dataclass(frozen=True, slots=True)
class DocEntry:
    id: str
    kind: str
    name: str
    body: str
    url: str
    signature: str | None = None
    categories: tuple[str, ...] = ()
    # Present on kind="primitive" entries only.
    primitive_kind: str | None = None
    arity_min: int | None = None
    arity_max: int | None = None  # None with arity_min set means unbounded


@dataclass
class Corpus:
    entries: list[DocEntry] = field(default_factory=list)
    by_id: dict[str, DocEntry] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def get(self, entry_id: str) -> DocEntry | None:
        return self.by_id.get(entry_id)


def _entry_from_obj(obj: dict, line: int) -> DocEntry:
    for required in ("id", "kind", "name", "body", "url"):
        if not isinstance(obj.get(required), str) or not obj[required]:
            raise CorpusParseError(line, f"missing or empty field {required!r}")
    if obj["kind"] not in ENTRY_KINDS:
        raise CorpusParseError(line, f"unknown entry kind {obj['kind']!r}")
    categories = obj.get("categories", [])
    if not isinstance(categories, list) or not all(isinstance(c, str) for c in categories):
        raise CorpusParseError(line, "categories must be a list of strings")
    arity_max = obj.get("arity_max")
    return DocEntry(
        id=obj["id"],
        kind=obj["kind"],
        name=obj["name"],
        body=obj["body"],
        url=obj["url"],
        signature=obj.get("signature"),
        categories=tuple(categories),
        primitive_kind=obj.get("primitive_kind"),
        arity_min=obj.get("arity_min"),
        arity_max=arity_max if arity_max is not None else None,
    )


def ingest_lines(lines: Iterable[str]) -> Corpus:
    corpus = Corpus()
    for lineno, raw in enumerate(lines, start=1):
        raw = raw.strip()
        if not raw:
            continue
        try:
            obj = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise CorpusParseError(lineno, f"invalid JSON: {exc.msg}") from exc
        if not isinstance(obj, dict):
            raise CorpusParseError(lineno, "entry is not a JSON object")
        entry = _entry_from_obj(obj, lineno)
        if entry.id in corpus.by_id:
            raise DuplicateId(entry.id)
        corpus.entries.append(entry)
        corpus.by_id[entry.id] = entry
    return corpus


def ingest(path: str | Path) -> Corpus:
    """Load a corpus from a JSON Lines file."""
    text = Path(path).read_text(encoding="utf-8")
    return ingest_lines(text.splitlines())


def bundled_corpus_path() -> Path:
    return Path(str(resources.files("netlogo_assistant").joinpath("data/corpus.jsonl")))


def load_bundled_corpus() -> Corpus:
    return ingest(bundled_corpus_path())

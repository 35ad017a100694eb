"""Context-rich rewrites of terse diagnostic messages.

The rewrite table ships as a data file (code -> message template with
{{name}}, {{line}} and {{suggestions}} placeholders) so it can be
extended without touching code. Clarification is total: unknown codes
fall back to an orientation sentence prefixed to the raw message.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .dictionary import Dictionary

UNKNOWN_CODE = "UNKNOWN"

_ORIENTATION = (
    "NetLogo reported a problem with this code. The original message follows: "
)


@dataclass(frozen=True, slots=True)
class ClarifyRule:
    code: str
    template: str
    doc_query: str


@dataclass(frozen=True, slots=True)
class ClarifyContext:
    name: str | None = None
    line: int | None = None
    excerpt: str | None = None


@dataclass(frozen=True, slots=True)
class Clarification:
    message: str
    doc_ids: tuple[str, ...]
    doc_query: str | None = None


def levenshtein(a: str, b: str) -> int:
    if a == b:
        return 0
    if not a:
        return len(b)
    if not b:
        return len(a)
    previous = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        current = [i]
        for j, cb in enumerate(b, start=1):
            current.append(
                min(
                    previous[j] + 1,  # deletion
                    current[j - 1] + 1,  # insertion
                    previous[j - 1] + (ca != cb),  # substitution
                )
            )
        previous = current
    return previous[-1]


def nearest_primitives(
    name: str, dictionary: Dictionary, max_distance: int = 2, limit: int = 3
) -> list[str]:
    """Dictionary names within edit distance max_distance, closest first,
    ties broken alphabetically."""
    target = name.lower()
    scored = []
    for candidate in dictionary.names():
        if abs(len(candidate) - len(target)) > max_distance:
            continue
        dist = levenshtein(target, candidate)
        if dist <= max_distance:
            scored.append((dist, candidate))
    scored.sort()
    return [candidate for _, candidate in scored[:limit]]


def load_table(path: str | Path) -> dict[str, ClarifyRule]:
    raw = json.loads(Path(path).read_text(encoding="utf-8"))
    if not isinstance(raw, list):
        raise ValueError("clarification table must be a JSON array")
    table: dict[str, ClarifyRule] = {}
    for item in raw:
        rule = ClarifyRule(
            code=item["code"], template=item["template"], doc_query=item.get("doc_query", "")
        )
        table[rule.code] = rule
    return table


def bundled_table_path() -> Path:
    return Path(str(resources.files("netlogo_assistant").joinpath("data/clarifications.json")))


class Clarifier:
    """Rewrites diagnostic codes into context-rich prose, totally."""

    def __init__(self, table: dict[str, ClarifyRule], dictionary: Dictionary | None = None):
        self._table = table
        self._dictionary = dictionary

    @classmethod
    def bundled(cls, dictionary: Dictionary | None = None) -> "Clarifier":
        return cls(load_table(bundled_table_path()), dictionary)

    def codes(self) -> set[str]:
        return set(self._table)

    def doc_query(self, code: str, name: str | None = None) -> str | None:
        rule = self._table.get(code)
        if rule is None or not rule.doc_query:
            return None
        query = rule.doc_query.replace("{{name}}", name or "").strip()
        return query or None

    def clarify(
        self,
        code: str,
        raw_message: str,
        context: ClarifyContext | None = None,
    ) -> Clarification:
        rule = self._table.get(code)
        if rule is None:
            text = raw_message.strip() or "(no further detail was reported)"
            return Clarification(message=_ORIENTATION + text, doc_ids=())

        context = context or ClarifyContext()
        name = context.name or "this name"
        line = str(context.line) if context.line is not None else "?"

        doc_ids: list[str] = []
        suggestions_text = ""
        if self._dictionary is not None and context.name:
            if code == "UNKNOWN-PRIMITIVE":
                matches = nearest_primitives(context.name, self._dictionary)
                for match in matches:
                    spec = self._dictionary.lookup(match)
                    if spec is not None:
                        doc_ids.append(spec.doc_id)
                if matches:
                    quoted = ", ".join(f"`{m}`" for m in matches)
                    suggestions_text = f"Did you mean {quoted}?"
                else:
                    suggestions_text = (
                        "No close match exists in the dictionary; "
                        "check the spelling or declare the name first."
                    )
            else:
                spec = self._dictionary.lookup(context.name)
                if spec is not None:
                    doc_ids.append(spec.doc_id)

        message = (
            rule.template.replace("{{name}}", name)
            .replace("{{line}}", line)
            .replace("{{suggestions}}", suggestions_text)
            .strip()
        )
        if not message:
            message = _ORIENTATION + (raw_message.strip() or code)
        doc_query = rule.doc_query.replace("{{name}}", context.name or "") or None
        return Clarification(message=message, doc_ids=tuple(doc_ids), doc_query=doc_query)


def clarify_error(
    code: str,
    raw_message: str,
    context: ClarifyContext | None = None,
    *,
    clarifier: Clarifier | None = None,
) -> Clarification:
    """Total convenience wrapper over the bundled table."""
    active = clarifier or Clarifier.bundled()
    return active.clarify(code, raw_message, context)

"""Primitive dictionary derived from the documentation corpus.

Lookup is case-insensitive; canonical names are lower-case. Structural
keywords (``to``, ``end``, declaration forms) are not primitives and
live in KEYWORDS.
"""

from __future__ import annotations

from dataclasses import dataclass

from .corpus import Corpus

# Structural words of the language; not in the primitive dictionary.
KEYWORDS = frozenset(
    {
        "to",
        "to-report",
        "end",
        "globals",
        "breed",
        "directed-link-breed",
        "undirected-link-breed",
        "turtles-own",
        "patches-own",
        "links-own",
        "extensions",
        "__includes",
    }
)


class DictionaryError(Exception):
    pass


class DuplicatePrimitive(DictionaryError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"primitive defined twice: {name}")


class MalformedEntry(DictionaryError):
    def __init__(self, entry_id: str, field: str):
        self.entry_id = entry_id
        self.field = field
        super().__init__(f"corpus entry {entry_id}: bad or missing field {field!r}")


@dataclass(frozen=True, slots=True)
class PrimitiveSpec:
    name: str  # lower-case canonical
    kind: str  # "command" | "reporter"
    arity_min: int
    arity_max: int | None  # None = unbounded
    categories: tuple[str, ...]
    doc_id: str


class Dictionary:
    """Read-only name -> PrimitiveSpec map; safe for concurrent reads."""

    def __init__(self, specs: dict[str, PrimitiveSpec]):
        self._specs = specs

    def __len__(self) -> int:
        return len(self._specs)

    def __contains__(self, name: str) -> bool:
        return name.lower() in self._specs

    def lookup(self, name: str) -> PrimitiveSpec | None:
        return self._specs.get(name.lower())

    def names(self) -> list[str]:
        return sorted(self._specs)


def load_dictionary(corpus: Corpus) -> Dictionary:
    """Build the primitive dictionary from corpus entries of kind "primitive"."""
    specs: dict[str, PrimitiveSpec] = {}
    for entry in corpus:
        if entry.kind != "primitive":
            continue
        if entry.primitive_kind not in ("command", "reporter"):
            raise MalformedEntry(entry.id, "primitive_kind")
        if not isinstance(entry.arity_min, int) or entry.arity_min < 0:
            raise MalformedEntry(entry.id, "arity_min")
        if entry.arity_max is not None:
            if not isinstance(entry.arity_max, int) or entry.arity_max < entry.arity_min:
                raise MalformedEntry(entry.id, "arity_max")
        name = entry.name.lower()
        if name in specs:
            raise DuplicatePrimitive(name)
        specs[name] = PrimitiveSpec(
            name=name,
            kind=entry.primitive_kind,
            arity_min=entry.arity_min,
            arity_max=entry.arity_max,
            categories=entry.categories,
            doc_id=entry.id,
        )
    return Dictionary(specs)

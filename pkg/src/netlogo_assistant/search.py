"""BM25 ranking over the documentation corpus.

Plain lexical retrieval (k1 = 1.2, b = 0.75) over an inverted index of
lower-cased terms from name + signature + body, with a name-field
boost: each distinct query term found among an entry's name tokens
doubles that entry's score. IDF uses the smoothed non-negative form
ln(1 + (N - n + 0.5) / (n + 0.5)) so scores stay positive.

Retriever contract for substituting another engine: ``(query, k) ->
ranked SearchHit list``; anything exposing ``search(query, k)`` with
that shape can stand in for the index.
"""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass, field

from .corpus import Corpus, DocEntry

K1 = 1.2
B = 0.75
NAME_BOOST = 2.0
SNIPPET_WIDTH = 400

# NetLogo names like wolf-sheep and any? must survive term splitting.
_TERM_RE = re.compile(r"[a-z0-9?-]+")


class EmptyCorpus(Exception):
    pass


def split_terms(text: str) -> list[str]:
    """Lower-case terms split on punctuation except '-' and '?'."""
    return _TERM_RE.findall(text.lower())


@dataclass(frozen=True, slots=True)
class SearchHit:
    doc_id: str
    score: float
    snippet: str

    def to_dict(self) -> dict:
        return {"doc_id": self.doc_id, "score": self.score, "snippet": self.snippet}


@dataclass
class Index:
    corpus: Corpus
    postings: dict[str, dict[str, int]] = field(default_factory=dict)
    doc_lengths: dict[str, int] = field(default_factory=dict)
    name_terms: dict[str, frozenset[str]] = field(default_factory=dict)
    avg_length: float = 0.0

    @property
    def size(self) -> int:
        return len(self.doc_lengths)

    def entry(self, doc_id: str) -> DocEntry:
        entry = self.corpus.get(doc_id)
        assert entry is not None, doc_id
        return entry


def build_index(corpus: Corpus) -> Index:
    """Inverted index plus the document statistics BM25 needs."""
    if len(corpus) == 0:
        raise EmptyCorpus("cannot index an empty corpus")
    index = Index(corpus=corpus)
    total = 0
    for entry in corpus:
        text = " ".join(filter(None, (entry.name, entry.signature, entry.body)))
        terms = split_terms(text)
        index.doc_lengths[entry.id] = len(terms)
        index.name_terms[entry.id] = frozenset(split_terms(entry.name))
        total += len(terms)
        for term, count in Counter(terms).items():
            index.postings.setdefault(term, {})[entry.id] = count
    index.avg_length = total / len(corpus)
    return index


def _idf(index: Index, term: str) -> float:
    n = len(index.postings.get(term, ()))
    return math.log(1.0 + (index.size - n + 0.5) / (n + 0.5))


def score_document(index: Index, doc_id: str, query_terms: list[str]) -> float:
    """BM25 score of one document for the given terms, with name boost.

    Exposed separately so tests can compare the ranking path against
    values computed by hand.
    """
    dl = index.doc_lengths[doc_id]
    norm = K1 * (1.0 - B + B * dl / index.avg_length)
    score = 0.0
    for term in set(query_terms):
        tf = index.postings.get(term, {}).get(doc_id, 0)
        if tf == 0:
            continue
        score += _idf(index, term) * tf * (K1 + 1.0) / (tf + norm)
    if score > 0.0:
        for term in set(query_terms):
            if term in index.name_terms[doc_id]:
                score *= NAME_BOOST
    return score


def _snippet(body: str, query_terms: list[str]) -> str:
    if len(body) <= SNIPPET_WIDTH:
        return body
    lowered = body.lower()
    occurrences: list[tuple[int, str]] = []
    for term in set(query_terms):
        for match in re.finditer(re.escape(term), lowered):
            occurrences.append((match.start(), term))
    if not occurrences:
        return body[:SNIPPET_WIDTH]
    occurrences.sort()
    # First window (anchored at a match, centered on it) containing the
    # most distinct query terms.
    best_start, best_count = 0, -1
    for anchor, _ in occurrences:
        start = max(0, min(anchor - SNIPPET_WIDTH // 2, len(body) - SNIPPET_WIDTH))
        end = start + SNIPPET_WIDTH
        count = len({term for pos, term in occurrences if start <= pos < end})
        if count > best_count:
            best_start, best_count = start, count
    return body[best_start : best_start + SNIPPET_WIDTH]


def search(index: Index, query: str, k: int = 3) -> list[SearchHit]:
    """Top-k hits in non-increasing score order; ties break on doc id."""
    if k < 1:
        raise ValueError("k must be >= 1")
    query_terms = split_terms(query)
    if not query_terms:
        return []
    candidates: set[str] = set()
    for term in query_terms:
        candidates.update(index.postings.get(term, ()))
    scored = []
    for doc_id in candidates:
        score = score_document(index, doc_id, query_terms)
        if score > 0.0:
            scored.append((-score, doc_id))
    scored.sort()
    hits = []
    for neg_score, doc_id in scored[:k]:
        body = index.entry(doc_id).body
        hits.append(SearchHit(doc_id=doc_id, score=-neg_score, snippet=_snippet(body, query_terms)))
    return hits

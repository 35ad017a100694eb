import json
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from netlogo_assistant.corpus import ingest_lines
from netlogo_assistant.search import EmptyCorpus, build_index, search, split_terms

K1 = 1.2
B = 0.75


def doc_line(entry_id, name, body, kind="guide"):
    return json.dumps(
        {
            "id": entry_id,
            "kind": kind,
            "name": name,
            "categories": [],
            "body": body,
            "url": f"https://example.org/{entry_id}",
        }
    )


def toy_index():
    corpus = ingest_lines(
        [
            doc_line("a", "alpha", "turtle moves fast turtle"),
            doc_line("b", "beta", "a turtle sits still here"),
            doc_line("c", "gamma", "no reptiles at all whatsoever"),
        ]
    )
    return build_index(corpus)


# ---- hand-computed oracle -------------------------------------------------
# Index text is name + body. Term counts, counted by hand:
#   doc a: [alpha, turtle, moves, fast, turtle]          dl=5, tf(turtle)=2
#   doc b: [beta, a, turtle, sits, still, here]          dl=6, tf(turtle)=1
#   doc c: [gamma, no, reptiles, at, all, whatsoever]    dl=6, tf(turtle)=0
# N=3, avgdl=17/3, n(turtle)=2
# idf = ln(1 + (N - n + 0.5) / (n + 0.5)) = ln(1.6)
# score = idf * tf * (k1+1) / (tf + k1 * (1 - b + b * dl / avgdl))


def _oracle_score(tf, dl, n, N=3, avgdl=17 / 3):
    idf = math.log(1.0 + (N - n + 0.5) / (n + 0.5))
    return idf * tf * (K1 + 1.0) / (tf + K1 * (1.0 - B + B * dl / avgdl))


ORACLE_A = _oracle_score(tf=2, dl=5, n=2)
ORACLE_B = _oracle_score(tf=1, dl=6, n=2)


def test_bm25_scores_match_hand_computed_oracle():
    hits = search(toy_index(), "turtle", 3)
    assert [h.doc_id for h in hits] == ["a", "b"]
    assert hits[0].score == pytest.approx(ORACLE_A, rel=1e-9)
    assert hits[1].score == pytest.approx(ORACLE_B, rel=1e-9)


def test_oracle_values_are_what_the_arithmetic_says():
    # freeze the numbers so a change in either formula shows up loudly
    assert ORACLE_A == pytest.approx(0.6683701799920349, rel=1e-8)
    assert ORACLE_B == pytest.approx(0.4589591575402223, rel=1e-8)


def test_name_match_doubles_score_per_matching_term():
    index = toy_index()
    hits = search(index, "beta turtle", 3)
    by_id = {h.doc_id: h.score for h in hits}
    # doc b: contributions for beta (tf=1, n=1) and turtle (tf=1, n=2),
    # then one x2 boost because "beta" appears in the name.
    expected_b = (_oracle_score(1, 6, 1) + _oracle_score(1, 6, 2)) * 2.0
    assert by_id["b"] == pytest.approx(expected_b, rel=1e-9)
    # doc a matches only "turtle", no boost
    assert by_id["a"] == pytest.approx(ORACLE_A, rel=1e-9)
    assert hits[0].doc_id == "b"


def test_term_splitting_keeps_hyphen_and_question_mark():
    assert split_terms("Wolf-sheep predation, any? (fd)!") == [
        "wolf-sheep",
        "predation",
        "any?",
        "fd",
    ]


def test_sole_match_ranks_first():
    index = toy_index()
    hits = search(index, "reptiles", 3)
    assert [h.doc_id for h in hits] == ["c"]


def test_no_matching_term_returns_empty():
    assert search(toy_index(), "spaceship", 5) == []
    assert search(toy_index(), "", 5) == []


def test_ties_break_by_doc_id_ascending():
    corpus = ingest_lines(
        [
            doc_line("b", "north", "shared words equal everywhere"),
            doc_line("a", "south", "shared words equal everywhere"),
        ]
    )
    hits = search(build_index(corpus), "shared equal", 2)
    assert [h.doc_id for h in hits] == ["a", "b"]
    assert hits[0].score == pytest.approx(hits[1].score)


def test_never_more_than_k_and_never_score_zero():
    corpus = ingest_lines(
        [doc_line(f"d{i}", f"name{i}", "common words here") for i in range(10)]
    )
    hits = search(build_index(corpus), "common", 4)
    assert len(hits) == 4
    assert all(h.score > 0 for h in hits)


def test_empty_corpus_rejected():
    with pytest.raises(EmptyCorpus):
        build_index(ingest_lines([]))


def test_snippet_short_body_is_whole_body():
    hits = search(toy_index(), "turtle", 1)
    assert hits[0].snippet == "turtle moves fast turtle"


def test_snippet_windows_onto_the_match():
    filler = "x " * 300  # 600 chars of padding before the match
    corpus = ingest_lines(
        [doc_line("long", "padded", filler + "wolf-sheep lives here " + "y " * 300)]
    )
    hits = search(build_index(corpus), "wolf-sheep", 1)
    assert len(hits[0].snippet) <= 400
    assert "wolf-sheep" in hits[0].snippet


def test_snippet_prefers_window_with_most_distinct_terms():
    body = "alpha " + "pad " * 150 + "alpha beta gamma " + "pad " * 150
    corpus = ingest_lines([doc_line("w", "windows", body)])
    hits = search(build_index(corpus), "alpha beta gamma", 1)
    assert "beta" in hits[0].snippet and "gamma" in hits[0].snippet


def test_bundled_primitive_names_appear_in_their_posting_lists(corpus, index):
    for entry in corpus:
        if entry.kind != "primitive":
            continue
        for term in split_terms(entry.name):
            assert entry.id in index.postings.get(term, {}), (entry.id, term)


def test_bundled_hits_resolve_to_citable_entries(index):
    for query in ("wolf-sheep predation", "flocking", "fd", "ask turtles", "lists"):
        for hit in search(index, query, 5):
            entry = index.entry(hit.doc_id)
            assert entry.url


VOCAB = ["red", "blue", "green", "wolf", "sheep", "fast", "slow", "pad"]


@settings(max_examples=150, deadline=None)
@given(
    docs=st.lists(
        st.lists(st.sampled_from(VOCAB), min_size=5, max_size=5),
        min_size=2,
        max_size=6,
    ),
    query=st.sampled_from(VOCAB[:4]),
)
def test_adding_a_disjoint_doc_preserves_relative_order(docs, query):
    # Fixed-length docs so average length stays put when one more arrives.
    # Single-term queries only: with this IDF, one extra document raises
    # every term's idf by the same amount, so multi-term rankings can
    # legitimately reorder even at fixed document length.
    lines = [doc_line(f"d{i}", "name", " ".join(words)) for i, words in enumerate(docs)]
    base = build_index(ingest_lines(lines))
    before = search(base, query, len(docs))
    grown = build_index(
        ingest_lines(lines + [doc_line("zz-new", "name", "filler words only here five")])
    )
    after = search(grown, query, len(docs) + 1)
    after_ids = [h.doc_id for h in after if h.doc_id != "zz-new"]
    assert [h.doc_id for h in before] == after_ids


@settings(max_examples=150, deadline=None)
@given(
    docs=st.lists(
        st.lists(st.sampled_from(VOCAB), min_size=2, max_size=9),
        min_size=1,
        max_size=6,
    ),
    query=st.lists(st.sampled_from(VOCAB), min_size=1, max_size=3),
    k=st.integers(min_value=1, max_value=5),
)
def test_hit_order_and_bounds_hold_for_random_corpora(docs, query, k):
    lines = [doc_line(f"d{i}", f"n{i}", " ".join(words)) for i, words in enumerate(docs)]
    hits = search(build_index(ingest_lines(lines)), " ".join(query), k)
    assert len(hits) <= k
    assert all(h.score > 0 for h in hits)
    for first, second in zip(hits, hits[1:]):
        assert first.score > second.score or (
            first.score == second.score and first.doc_id < second.doc_id
        )

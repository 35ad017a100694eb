import json

import pytest

from netlogo_assistant.corpus import (
    CorpusParseError,
    DuplicateId,
    bundled_corpus_path,
    ingest,
    ingest_lines,
)


def entry_line(entry_id="x", kind="guide", name="Thing", body="text", url="https://example.org"):
    return json.dumps(
        {"id": entry_id, "kind": kind, "name": name, "categories": [], "body": body, "url": url}
    )


def test_three_line_file_loads_three_entries(tmp_path):
    path = tmp_path / "c.jsonl"
    path.write_text(
        "\n".join(entry_line(entry_id=f"e{i}") for i in range(3)) + "\n", encoding="utf-8"
    )
    corpus = ingest(path)
    assert len(corpus) == 3


def test_duplicate_id_rejected():
    with pytest.raises(DuplicateId) as excinfo:
        ingest_lines([entry_line("same"), entry_line("same")])
    assert excinfo.value.entry_id == "same"


def test_bundled_corpus_size_matches_line_count(corpus):
    lines = [
        line
        for line in bundled_corpus_path().read_text(encoding="utf-8").splitlines()
        if line.strip()
    ]
    assert len(corpus) == len(lines)


def test_invalid_json_names_the_line():
    with pytest.raises(CorpusParseError) as excinfo:
        ingest_lines([entry_line("a"), "{not json"])
    assert excinfo.value.line == 2


def test_missing_field_rejected():
    bad = json.dumps({"id": "a", "kind": "guide", "name": "x", "body": "y"})  # no url
    with pytest.raises(CorpusParseError):
        ingest_lines([bad])


def test_unknown_kind_rejected():
    bad = entry_line(kind="video")
    with pytest.raises(CorpusParseError):
        ingest_lines([bad])


def test_every_bundled_entry_has_url_and_unique_id(corpus):
    seen = set()
    for entry in corpus:
        assert entry.url
        assert entry.id not in seen
        seen.add(entry.id)

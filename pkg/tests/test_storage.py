import random

import pytest

from conftest import random_session
from netlogo_assistant.session import Session, TickClock
from netlogo_assistant.storage import SessionStore


def test_round_trip_simple_session(tmp_path):
    store = SessionStore(tmp_path)
    clock = TickClock()
    session = Session.create("abc", clock)
    session.add_turn("user", {"text": "hi"}, clock)
    session.emit("plan", {"text": "thinking"}, clock)
    chunk = session.new_chunk("to go fd 1 end", "llm-generated")
    store.save(session)

    loaded = store.load("abc")
    assert loaded == session
    assert loaded.code_chunks[chunk.chunk_id].source_text == "to go fd 1 end"


def test_round_trip_generated_sessions(tmp_path):
    store = SessionStore(tmp_path)
    rng = random.Random(99)
    for _ in range(40):
        session = random_session(rng)
        store.save(session)
        assert store.load(session.session_id) == session


def test_missing_session_loads_as_none(tmp_path):
    assert SessionStore(tmp_path).load("ghost") is None


def test_sequence_numbers_continue_after_reload(tmp_path):
    store = SessionStore(tmp_path)
    clock = TickClock()
    session = Session.create("seq", clock)
    for i in range(3):
        session.emit("plan", {"text": str(i)}, clock)
    store.save(session)

    reloaded = SessionStore(tmp_path).load("seq")
    event = reloaded.emit("plan", {"text": "after restart"}, clock)
    assert event.seq == 4
    seqs = [e.seq for e in reloaded.events]
    assert seqs == sorted(seqs) == list(range(1, 5))


def test_list_ids(tmp_path):
    store = SessionStore(tmp_path)
    clock = TickClock()
    for sid in ("b", "a"):
        store.save(Session.create(sid, clock))
    assert store.list_ids() == ["a", "b"]


def test_session_ids_are_sanitized_for_paths(tmp_path):
    store = SessionStore(tmp_path)
    clock = TickClock()
    session = Session.create("../evil/../../name", clock)
    store.save(session)
    files = list(tmp_path.glob("*.json"))
    assert len(files) == 1
    assert files[0].parent == tmp_path


def test_unwritable_data_dir_raises(tmp_path):
    target = tmp_path / "blocked"
    target.write_text("a file, not a dir", encoding="utf-8")
    with pytest.raises(Exception):
        SessionStore(target).save(Session.create("x", TickClock()))

from __future__ import annotations

import random
from pathlib import Path

import pytest

from netlogo_assistant.clarify import Clarifier
from netlogo_assistant.corpus import load_bundled_corpus
from netlogo_assistant.dictionary import load_dictionary
from netlogo_assistant.gateway import Gateway, ScriptedBackend, load_scenario
from netlogo_assistant.linting import Diagnostic, Linter, Span
from netlogo_assistant.orchestrator import Engine
from netlogo_assistant.search import build_index
from netlogo_assistant.session import RetrievalRecord, Session, TickClock
from netlogo_assistant.steps import Question
from netlogo_assistant.templates import load_template_set

SCENARIO_DIR = Path(__file__).resolve().parents[1] / "src/netlogo_assistant/data/scenarios"
GOLDEN_DIR = Path(__file__).resolve().parent / "golden"


@pytest.fixture(scope="session")
def corpus():
    return load_bundled_corpus()


@pytest.fixture(scope="session")
def dictionary(corpus):
    return load_dictionary(corpus)


@pytest.fixture(scope="session")
def index(corpus):
    return build_index(corpus)


@pytest.fixture(scope="session")
def linter(dictionary):
    return Linter(dictionary, Clarifier.bundled(dictionary))


@pytest.fixture(scope="session")
def templates():
    return load_template_set()


def make_engine(
    index,
    linter,
    templates,
    scenario_name: str | None = None,
    backends: dict | None = None,
    routing: dict | None = None,
    max_iterations: int = 6,
) -> Engine:
    if backends is None:
        scenario = load_scenario(SCENARIO_DIR / f"{scenario_name}.json")
        backends = {"scripted": ScriptedBackend(scenario)}
        routing = {"default": "scripted"}
    gateway = Gateway(backends, routing or {"default": next(iter(backends))})
    return Engine(
        gateway=gateway,
        index=index,
        linter=linter,
        templates=templates,
        clock=TickClock(),
        max_iterations=max_iterations,
    )


@pytest.fixture
def engine_factory(index, linter, templates):
    def factory(scenario_name=None, backends=None, routing=None, max_iterations=6):
        return make_engine(
            index, linter, templates, scenario_name, backends, routing, max_iterations
        )

    return factory


def random_session(rng: random.Random) -> Session:
    """Arbitrary but well-formed session for persistence round trips."""
    clock = TickClock(start=rng.randrange(0, 10_000))
    session = Session.create(f"s-{rng.randrange(1_000_000)}", clock)
    for _ in range(rng.randrange(0, 8)):
        kind = rng.choice(["user", "agent", "system"])
        if kind == "user":
            payload = {"text": f"msg {rng.randrange(100)}"}
        elif kind == "agent":
            payload = {
                "plan": f"plan {rng.randrange(100)}",
                "action": rng.choice(["Clarify", "Search", "Respond", "Apologize"]),
                "parameter": f"param {rng.randrange(100)}",
            }
        else:
            payload = {"event": "search-results", "query": "q", "results": []}
        session.add_turn(kind, payload, clock)
    for _ in range(rng.randrange(0, 3)):
        chunk = session.new_chunk(f"to go fd {rng.randrange(5)} end", "llm-generated")
        if rng.random() < 0.5:
            chunk.diagnostics = [
                Diagnostic(
                    code="UNKNOWN-PRIMITIVE",
                    severity="error",
                    span=Span(1, 1, 1, 4),
                    raw_message="nothing named zzq has been defined",
                    clarified_message="`zzq` is not a NetLogo primitive.",
                    suggested_doc_ids=("dict:fd",),
                )
            ]
            chunk.revision = rng.randrange(1, 5)
    if rng.random() < 0.3:
        session.pending_clarification = (
            Question(text="Which species?", suggested_answers=("Wolf", "Sheep")),
        )
    for _ in range(rng.randrange(0, 3)):
        session.retrieval_history.append(
            RetrievalRecord(query=f"q{rng.randrange(10)}", hit_ids=("dict:fd", "dict:ask"))
        )
    for i in range(rng.randrange(0, 6)):
        session.emit(
            rng.choice(["plan", "searching", "answer-fragment"]),
            {"text": f"event {i}"},
            clock,
        )
    return session

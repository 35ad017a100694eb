"""Durable conversation state: turns, code chunks, events, clarifications.

Sessions serialize to plain JSON and back without loss; the service
persists one file per session. Event sequence numbers and chunk
ordinals live on the session so they stay monotonic across restarts.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Protocol

from .linting import CodeChunk
from .steps import Question


class Clock(Protocol):
    def now(self) -> str: ...


class SystemClock:
    def now(self) -> str:
        return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


class TickClock:
    """Deterministic clock for replay: one second per reading, starting
    at the Unix epoch."""

    def __init__(self, start: float = 0.0, step: float = 1.0):
        self._t = start
        self._step = step

    def now(self) -> str:
        stamp = datetime.fromtimestamp(self._t, tz=timezone.utc)
        self._t += self._step
        return stamp.strftime("%Y-%m-%dT%H:%M:%SZ")


EVENT_TYPES = (
    "plan",
    "searching",
    "search-results",
    "clarification",
    "answer-fragment",
    "code-chunk",
    "diagnostics",
    "apology",
    "error",
)

TERMINAL_EVENT_TYPES = ("answer-fragment", "clarification", "apology", "error")


@dataclass(frozen=True, slots=True)
class AgentEvent:
    seq: int
    type: str
    payload: dict
    ts: str

    def to_frame(self) -> dict:
        return {"seq": self.seq, "type": self.type, "payload": self.payload, "ts": self.ts}

    @classmethod
    def from_frame(cls, obj: dict) -> "AgentEvent":
        return cls(seq=obj["seq"], type=obj["type"], payload=obj["payload"], ts=obj["ts"])


@dataclass(frozen=True, slots=True)
class Turn:
    kind: str  # "user" | "agent" | "system"
    payload: dict
    timestamp: str

    def to_dict(self) -> dict:
        return {"kind": self.kind, "payload": self.payload, "timestamp": self.timestamp}

    @classmethod
    def from_dict(cls, obj: dict) -> "Turn":
        return cls(kind=obj["kind"], payload=obj["payload"], timestamp=obj["timestamp"])


@dataclass(frozen=True, slots=True)
class RetrievalRecord:
    query: str
    hit_ids: tuple[str, ...]

    def to_dict(self) -> dict:
        return {"query": self.query, "hit_ids": list(self.hit_ids)}

    @classmethod
    def from_dict(cls, obj: dict) -> "RetrievalRecord":
        return cls(query=obj["query"], hit_ids=tuple(obj["hit_ids"]))


@dataclass
class Session:
    session_id: str
    created_at: str
    updated_at: str
    turns: list[Turn] = field(default_factory=list)
    code_chunks: dict[str, CodeChunk] = field(default_factory=dict)
    pending_clarification: tuple[Question, ...] | None = None
    retrieval_history: list[RetrievalRecord] = field(default_factory=list)
    events: list[AgentEvent] = field(default_factory=list)
    last_seq: int = 0
    next_chunk_ordinal: int = 0

    @classmethod
    def create(cls, session_id: str, clock: Clock) -> "Session":
        stamp = clock.now()
        return cls(session_id=session_id, created_at=stamp, updated_at=stamp)

    def add_turn(self, kind: str, payload: dict, clock: Clock) -> Turn:
        stamp = clock.now()
        turn = Turn(kind=kind, payload=payload, timestamp=stamp)
        self.turns.append(turn)
        self.updated_at = stamp
        return turn

    def emit(self, event_type: str, payload: dict, clock: Clock) -> AgentEvent:
        stamp = clock.now()
        self.last_seq += 1
        event = AgentEvent(seq=self.last_seq, type=event_type, payload=payload, ts=stamp)
        self.events.append(event)
        self.updated_at = stamp
        return event

    def new_chunk(self, source: str, origin: str) -> CodeChunk:
        self.next_chunk_ordinal += 1
        chunk = CodeChunk(
            chunk_id=f"chunk-{self.next_chunk_ordinal}",
            source_text=source,
            origin=origin,
        )
        self.code_chunks[chunk.chunk_id] = chunk
        return chunk

    def events_after(self, seq: int) -> list[AgentEvent]:
        return [e for e in self.events if e.seq > seq]

    def to_dict(self) -> dict:
        return {
            "session_id": self.session_id,
            "created_at": self.created_at,
            "updated_at": self.updated_at,
            "turns": [t.to_dict() for t in self.turns],
            "code_chunks": {cid: c.to_dict() for cid, c in self.code_chunks.items()},
            "pending_clarification": (
                [q.to_dict() for q in self.pending_clarification]
                if self.pending_clarification is not None
                else None
            ),
            "retrieval_history": [r.to_dict() for r in self.retrieval_history],
            "events": [e.to_frame() for e in self.events],
            "last_seq": self.last_seq,
            "next_chunk_ordinal": self.next_chunk_ordinal,
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "Session":
        pending = obj.get("pending_clarification")
        return cls(
            session_id=obj["session_id"],
            created_at=obj["created_at"],
            updated_at=obj["updated_at"],
            turns=[Turn.from_dict(t) for t in obj.get("turns", [])],
            code_chunks={
                cid: CodeChunk.from_dict(c) for cid, c in obj.get("code_chunks", {}).items()
            },
            pending_clarification=(
                tuple(
                    Question(text=q["text"], suggested_answers=tuple(q["suggested_answers"]))
                    for q in pending
                )
                if pending is not None
                else None
            ),
            retrieval_history=[
                RetrievalRecord.from_dict(r) for r in obj.get("retrieval_history", [])
            ],
            events=[AgentEvent.from_frame(e) for e in obj.get("events", [])],
            last_seq=obj.get("last_seq", 0),
            next_chunk_ordinal=obj.get("next_chunk_ordinal", 0),
        )

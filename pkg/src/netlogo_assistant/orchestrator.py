"""Plan/act loop: planning, action dispatch, re-planning on new input.

One gateway call per cycle produces a StructuredStep. Search feeds
retrieval hits back into the next planning round and also surfaces them
to the client, so the user sees the same sources the model saw. Clarify
suspends the exchange until the user answers. The loop is bounded:
after max_iterations searches it degrades to an answer composed from
the best hits instead of calling the model again.

Tags route each call through the gateway: loop cycles use "planning";
a Clarify or Respond step that arrives without its payload triggers one
recovery call under the "clarify" or "respond" tag with the dedicated
template; debug actions use "fix".
"""

from __future__ import annotations

import logging
from typing import Iterator

from .clarify import Clarifier
from .gateway import CompletionRequest, Gateway, GatewayError, Message
from .linting import Linter
from .search import Index, SearchHit, search
from .session import AgentEvent, Clock, RetrievalRecord, Session, SystemClock
from .steps import (
    Action,
    Question,
    StructuredStep,
    extract_code_blocks,
    parse_questions,
    parse_step,
    strip_code_blocks,
)
from .templates import PromptTemplate, render

logger = logging.getLogger(__name__)

FRAGMENT_SIZE = 400
DEFAULT_MAX_ITERATIONS = 6
DEFAULT_SEARCH_K = 3
DEFAULT_CONTEXT_TURNS = 6

DEBUG_MODES = ("explain", "auto-fix", "fix-with-ideas")

_FALLBACK_QUESTION = Question(
    text="Could you tell me more about what you want the model to do?",
    suggested_answers=("Describe the agents involved", "Describe the outcome to watch"),
)


class OrchestratorError(Exception):
    pass


class SessionNotFound(OrchestratorError):
    def __init__(self, session_id: str):
        self.session_id = session_id
        super().__init__(f"unknown session: {session_id}")


class ChunkNotFound(OrchestratorError):
    def __init__(self, chunk_id: str):
        self.chunk_id = chunk_id
        super().__init__(f"unknown chunk: {chunk_id}")


def _fragments(text: str) -> list[str]:
    if not text:
        return [""]
    return [text[i : i + FRAGMENT_SIZE] for i in range(0, len(text), FRAGMENT_SIZE)]


def _turn_text(turn) -> str:
    payload = turn.payload
    if turn.kind == "user":
        return payload.get("text", "")
    if turn.kind == "agent":
        return (
            f"Plan: {payload.get('plan', '')}\n"
            f"Action: {payload.get('action', '')}\n"
            f"Parameter: {payload.get('parameter', '')}"
        )
    if payload.get("event") == "search-results":
        lines = [f"search results for \"{payload.get('query', '')}\":"]
        for hit in payload.get("results", []):
            lines.append(f"  {hit['doc_id']} - {hit['name']}: {hit['snippet']} ({hit['url']})")
        return "\n".join(lines)
    return str(payload)


class Engine:
    """Drives sessions against the gateway, index and linter."""

    def __init__(
        self,
        gateway: Gateway,
        index: Index,
        linter: Linter,
        templates: dict[str, PromptTemplate],
        clock: Clock | None = None,
        max_iterations: int = DEFAULT_MAX_ITERATIONS,
        search_k: int = DEFAULT_SEARCH_K,
        context_turns: int = DEFAULT_CONTEXT_TURNS,
    ):
        self.gateway = gateway
        self.index = index
        self.linter = linter
        self.templates = templates
        self.clock = clock or SystemClock()
        self.max_iterations = max_iterations
        self.search_k = search_k
        self.context_turns = context_turns

    # ----- context -----

    def summarize_context(self, session: Session) -> str:
        """Digest for re-planning: recent turns verbatim, older ones as
        one-line synopses, plus the chunk inventory."""
        lines: list[str] = []
        if session.code_chunks:
            chunk_bits = ", ".join(
                f"{cid} (rev {session.code_chunks[cid].revision})"
                for cid in sorted(session.code_chunks)
            )
            lines.append(f"code chunks present: {chunk_bits}")
        turns = session.turns
        older = turns[: -self.context_turns] if len(turns) > self.context_turns else []
        recent = turns[-self.context_turns :] if turns else []
        for turn in older:
            flat = " ".join(_turn_text(turn).split())
            if len(flat) > 100:
                flat = flat[:97] + "..."
            lines.append(f"- {turn.kind}: {flat}")
        for turn in recent:
            lines.append(f"{turn.kind}: {_turn_text(turn)}")
        return "\n".join(lines)

    # ----- gateway plumbing -----

    def _complete(self, tag: str, template_id: str, bindings: dict[str, str]) -> str:
        template = self.templates[template_id]
        prompt = render(template, bindings)
        request = CompletionRequest(
            messages=(
                Message(role="system", content=template.preamble),
                Message(role="user", content=prompt),
            ),
            request_tag=tag,
        )
        return self.gateway.complete(request)

    def _hit_payload(self, hit: SearchHit) -> dict:
        entry = self.index.entry(hit.doc_id)
        return {
            "doc_id": hit.doc_id,
            "name": entry.name,
            "url": entry.url,
            "score": round(hit.score, 6),
            "snippet": hit.snippet,
        }

    @staticmethod
    def _format_hits(hits: list[dict]) -> str:
        return "\n".join(
            f"{h['doc_id']} - {h['name']}: {h['snippet']} ({h['url']})" for h in hits
        )

    # ----- main loop -----

    def handle_user_message(self, session: Session, message: str) -> Iterator[AgentEvent]:
        if not message:
            raise ValueError("message must be non-empty")
        answered_questions = session.pending_clarification
        if answered_questions is not None:
            session.pending_clarification = None
        session.add_turn("user", {"text": message}, self.clock)
        yield from self._run_loop(session, message, answered_questions)

    def _run_loop(
        self,
        session: Session,
        message: str,
        answered: tuple[Question, ...] | None,
    ) -> Iterator[AgentEvent]:
        searches = 0
        latest_hits: list[dict] = []
        collected_hits: dict[str, dict] = {}

        while True:
            bindings = {
                "user-request": message,
                "conversation-summary": self.summarize_context(session),
            }
            if answered is not None:
                questions = "; ".join(q.text for q in answered)
                bindings["conversation-summary"] += (
                    f"\n(the latest user message answers the pending questions: {questions})"
                )
            if latest_hits:
                bindings["search-results"] = self._format_hits(latest_hits)

            try:
                reply = self._complete("planning", "planning", bindings)
            except GatewayError as exc:
                yield session.emit("error", {"message": str(exc)}, self.clock)
                return

            step = parse_step(reply)
            yield session.emit("plan", {"text": step.plan}, self.clock)

            if step.action is Action.SEARCH:
                searches += 1
                query = step.text
                yield session.emit("searching", {"query": query}, self.clock)
                hits = search(self.index, query, self.search_k) if query else []
                payload_hits = [self._hit_payload(h) for h in hits]
                yield session.emit(
                    "search-results", {"query": query, "results": payload_hits}, self.clock
                )
                session.retrieval_history.append(
                    RetrievalRecord(
                        query=query, hit_ids=tuple(h["doc_id"] for h in payload_hits)
                    )
                )
                session.add_turn(
                    "system",
                    {"event": "search-results", "query": query, "results": payload_hits},
                    self.clock,
                )
                latest_hits = payload_hits
                for hit in payload_hits:
                    known = collected_hits.get(hit["doc_id"])
                    if known is None or hit["score"] > known["score"]:
                        collected_hits[hit["doc_id"]] = hit
                if searches >= self.max_iterations:
                    yield session.emit(
                        "error",
                        {
                            "message": (
                                f"search budget exhausted after {searches} searches; "
                                "composing an answer from the sources found so far"
                            )
                        },
                        self.clock,
                    )
                    yield from self._fallback_respond(session, collected_hits)
                    return
                continue

            if step.action is Action.CLARIFY:
                questions = step.questions
                if not questions:
                    questions = self._recover_questions(session, bindings)
                if not questions:
                    questions = (_FALLBACK_QUESTION,)
                session.pending_clarification = questions
                yield session.emit(
                    "clarification",
                    {"questions": [q.to_dict() for q in questions]},
                    self.clock,
                )
                self._record_agent_turn(session, step)
                return

            if step.action is Action.APOLOGIZE:
                yield session.emit(
                    "apology", {"reason": step.text.strip() or "(no reason given)"}, self.clock
                )
                self._record_agent_turn(session, step)
                return

            # Respond
            text = step.text
            if not text.strip():
                try:
                    text = self._complete("respond", "respond", bindings)
                except GatewayError as exc:
                    yield session.emit("error", {"message": str(exc)}, self.clock)
                    return
            yield from self._emit_response(session, text)
            self._record_agent_turn(
                session, StructuredStep(plan=step.plan, action=Action.RESPOND, text=text)
            )
            return

    def _recover_questions(
        self, session: Session, bindings: dict[str, str]
    ) -> tuple[Question, ...]:
        try:
            reply = self._complete("clarify", "clarify", bindings)
        except GatewayError:
            return ()
        return parse_questions(reply)

    def _record_agent_turn(self, session: Session, step: StructuredStep) -> None:
        if step.action is Action.CLARIFY:
            parameter = "\n".join(
                " | ".join((q.text, *q.suggested_answers)) for q in step.questions
            )
        else:
            parameter = step.text
        session.add_turn(
            "agent",
            {"plan": step.plan, "action": step.action.value, "parameter": parameter},
            self.clock,
        )

    def _emit_response(self, session: Session, text: str) -> Iterator[AgentEvent]:
        blocks = extract_code_blocks(text)
        chunks = []
        placeholders = []
        for code, _hint in blocks:
            chunk = session.new_chunk(code, origin="llm-generated")
            chunk.diagnostics = self.linter.check(chunk)
            chunks.append(chunk)
            placeholders.append(f"[see code chunk {chunk.chunk_id}]")
        prose = strip_code_blocks(text, placeholders) if blocks else text.strip()
        for fragment in _fragments(prose):
            yield session.emit("answer-fragment", {"text": fragment}, self.clock)
        for chunk in chunks:
            yield session.emit(
                "code-chunk",
                {
                    "chunk_id": chunk.chunk_id,
                    "source": chunk.source_text,
                    "origin": chunk.origin,
                    "revision": chunk.revision,
                },
                self.clock,
            )
            yield session.emit(
                "diagnostics",
                {
                    "chunk_id": chunk.chunk_id,
                    "revision": chunk.revision,
                    "diagnostics": [d.to_dict() for d in chunk.diagnostics],
                },
                self.clock,
            )

    def _fallback_respond(
        self, session: Session, collected_hits: dict[str, dict]
    ) -> Iterator[AgentEvent]:
        best = sorted(collected_hits.values(), key=lambda h: (-h["score"], h["doc_id"]))
        best = best[: self.search_k]
        if best:
            lines = [
                "I could not settle on an answer within the search budget, so here are "
                "the closest authoritative sources instead:"
            ]
            for hit in best:
                lines.append(f"- {hit['name']} ({hit['url']}): {hit['snippet']}")
            text = "\n".join(lines)
        else:
            text = (
                "I could not settle on an answer within the search budget, and no "
                "documentation matched the queries tried. Try rephrasing the request."
            )
        yield from self._emit_response(session, text)
        self._record_agent_turn(
            session,
            StructuredStep(plan="(search budget exhausted)", action=Action.RESPOND, text=text),
        )

    # ----- debug actions -----

    def debug_action(
        self,
        session: Session,
        chunk_id: str,
        mode: str,
        user_ideas: str | None = None,
    ) -> Iterator[AgentEvent]:
        if mode not in DEBUG_MODES:
            raise ValueError(f"unknown debug mode: {mode}")
        chunk = session.code_chunks.get(chunk_id)
        if chunk is None:
            raise ChunkNotFound(chunk_id)

        clarifier: Clarifier = self.linter.clarifier
        queries: list[str] = []
        for diag in chunk.diagnostics:
            if diag.suggested_doc_ids:
                names = []
                for doc_id in diag.suggested_doc_ids:
                    entry = self.index.corpus.get(doc_id)
                    if entry is not None:
                        names.append(entry.name)
                query = " ".join(names)
            else:
                query = clarifier.doc_query(diag.code) or ""
            if query and query not in queries:
                queries.append(query)
        queries = queries[:3]

        hit_lines: list[dict] = []
        for query in queries:
            yield session.emit("searching", {"query": query}, self.clock)
            hits = search(self.index, query, self.search_k)
            payload_hits = [self._hit_payload(h) for h in hits]
            yield session.emit(
                "search-results", {"query": query, "results": payload_hits}, self.clock
            )
            session.retrieval_history.append(
                RetrievalRecord(query=query, hit_ids=tuple(h["doc_id"] for h in payload_hits))
            )
            hit_lines.extend(payload_hits)

        if mode == "explain":
            instruction = "Explain the problem"
        elif mode == "auto-fix":
            instruction = "Fix the code"
        else:
            instruction = f"Fix the code using these ideas: {user_ideas or ''}".strip()

        bindings = {
            "user-request": instruction,
            "code-context": chunk.source_text,
            "error-context": "\n".join(d.clarified_message for d in chunk.diagnostics),
            "conversation-summary": self.summarize_context(session),
        }
        if hit_lines:
            bindings["search-results"] = self._format_hits(hit_lines)
        if user_ideas:
            bindings["user-ideas"] = user_ideas

        try:
            reply = self._complete("fix", "fix", bindings)
        except GatewayError as exc:
            yield session.emit("error", {"message": str(exc)}, self.clock)
            return

        if mode == "explain":
            for fragment in _fragments(reply.strip()):
                yield session.emit("answer-fragment", {"text": fragment}, self.clock)
        else:
            blocks = extract_code_blocks(reply)
            if blocks:
                replacement = blocks[0][0]
                prose = strip_code_blocks(
                    reply, [f"[updated code chunk {chunk.chunk_id}]"] * len(blocks)
                )
                chunk.source_text = replacement
                chunk.origin = "llm-generated"
                chunk.revision += 1
                chunk.diagnostics = self.linter.check(chunk)
                for fragment in _fragments(prose):
                    yield session.emit("answer-fragment", {"text": fragment}, self.clock)
                yield session.emit(
                    "code-chunk",
                    {
                        "chunk_id": chunk.chunk_id,
                        "source": chunk.source_text,
                        "origin": chunk.origin,
                        "revision": chunk.revision,
                    },
                    self.clock,
                )
                yield session.emit(
                    "diagnostics",
                    {
                        "chunk_id": chunk.chunk_id,
                        "revision": chunk.revision,
                        "diagnostics": [d.to_dict() for d in chunk.diagnostics],
                    },
                    self.clock,
                )
            else:
                for fragment in _fragments(reply.strip()):
                    yield session.emit("answer-fragment", {"text": fragment}, self.clock)
        session.add_turn(
            "agent",
            {"plan": f"(debug {mode})", "action": "Respond", "parameter": reply},
            self.clock,
        )

    # ----- chunk editing -----

    def update_chunk(self, session: Session, chunk_id: str, new_source: str):
        chunk = session.code_chunks.get(chunk_id)
        if chunk is None:
            raise ChunkNotFound(chunk_id)
        chunk.source_text = new_source
        chunk.origin = "user-edited"
        chunk.revision += 1
        chunk.diagnostics = self.linter.check(chunk)
        session.emit(
            "diagnostics",
            {
                "chunk_id": chunk.chunk_id,
                "revision": chunk.revision,
                "diagnostics": [d.to_dict() for d in chunk.diagnostics],
            },
            self.clock,
        )
        return chunk.diagnostics
